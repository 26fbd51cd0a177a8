#include "hyperconc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hyperconc {

void ProtocolConfig::validate() const {
    if (n_parties < 2) throw std::invalid_argument("protocol needs at least 2 parties");
    params.validate();
}

double success_formula(const StateParams& p) {
    return 4.0 * std::norm(p.alpha * p.beta * p.delta * p.eta);
}

FockState build_input(int n_parties, const StateParams& params, int copy) {
    if (n_parties < 2) throw std::invalid_argument("protocol needs at least 2 parties");
    params.validate();
    auto table = ModeTable::protocol(n_parties, {copy});

    auto occupation = [&](Pol pol, Spatial sp) {
        OccupationVector occ(table->size(), 0);
        for (int p = 0; p < n_parties; ++p) {
            occ[table->index_of(ModeId{p, copy, sp, pol, 0})] = 1;
        }
        return occ;
    };

    FockState s(table);
    s.add_term(occupation(Pol::H, Spatial::Up), params.alpha * params.delta);
    s.add_term(occupation(Pol::H, Spatial::Down), params.alpha * params.eta);
    s.add_term(occupation(Pol::V, Spatial::Up), params.beta * params.delta);
    s.add_term(occupation(Pol::V, Spatial::Down), params.beta * params.eta);
    return s;
}

FockState flip_second_copy(const FockState& s) {
    const auto& table = *s.table();
    std::vector<Element> elems;
    std::vector<std::pair<ModeId, ModeId>> swaps;
    for (const auto& m : table.modes()) {
        if (m.copy != 2) continue;
        if (m.pol == Pol::H) {
            elems.push_back(Element::hwp45(Path{m.party, m.copy, m.spatial, m.aux}));
        }
        if (m.spatial == Spatial::Up) {
            swaps.emplace_back(m, ModeId{m.party, m.copy, Spatial::Down, m.pol, m.aux});
        }
    }
    if (elems.empty()) throw std::invalid_argument("state has no copy-2 modes to flip");
    elems.push_back(Element::relabel(std::move(swaps)));
    return apply_circuit(circuit_from_elements(s.table(), std::move(elems)), s);
}

FockState target_state(int n_parties) {
    StateParams balanced = StateParams::from_squares(0.5, 0.5);
    return build_input(n_parties, balanced, 1);
}

namespace {

struct DeviceSlice {
    Device device;
    std::size_t first = 0;  // offset of this device's detectors in the joint pattern
};

struct Engine {
    ProtocolConfig config;
    ModeTablePtr table;
    FockState joint;
    std::vector<DeviceSlice> devices;
    std::vector<ModeId> all_detector_modes;

    explicit Engine(const ProtocolConfig& cfg) : config(cfg), joint(nullptr) {
        cfg.validate();
        const int n = cfg.n_parties;
        const bool two_copies = cfg.variant == ProtocolVariant::TwoCopies;

        // Joint mode table: copy 1 for everyone, copy 2 for everyone
        // (TwoCopies) or for the two auxiliary photons only, plus ancilla
        // detector paths when the improved PPC is selected.
        std::vector<ModeId> modes;
        auto push_party = [&](int party, int copy) {
            for (Spatial sp : {Spatial::Up, Spatial::Down}) {
                for (Pol pol : {Pol::H, Pol::V}) {
                    modes.push_back(ModeId{party, copy, sp, pol, 0});
                }
            }
        };
        for (int p = 0; p < n; ++p) {
            push_party(p, 1);
            if (two_copies || p < 2) push_party(p, 2);
        }
        std::array<Path, 2> anc{Path{0, 2, Spatial::Up, 1}, Path{0, 2, Spatial::Down, 1}};
        if (cfg.ppc_variant == PpcVariant::Improved) {
            for (const Path& a : anc) {
                modes.push_back(a.mode(Pol::H));
                modes.push_back(a.mode(Pol::V));
            }
        }
        table = std::make_shared<ModeTable>(std::move(modes));

        // Input: |Psi1> tensor flipped second state (Eq.-10 form), with the
        // second state either a full copy or the two-photon auxiliary.
        FockState copy1 = build_input(n, cfg.params, 1);
        FockState second = two_copies ? build_input(n, cfg.params, 2)
                                      : build_input(2, cfg.params, 2);
        joint = tensor_product(copy1, flip_second_copy(second), table);

        auto paths = [](int party, int copy) {
            return std::array<Path, 2>{Path{party, copy, Spatial::Up, 0},
                                       Path{party, copy, Spatial::Down, 0}};
        };
        Device ppc = (cfg.ppc_variant == PpcVariant::Improved)
                         ? build_improved_ppc(table, paths(0, 1), paths(0, 2), anc)
                         : build_ppc(table, paths(0, 1), paths(0, 2));
        Device spc = build_spc(table, paths(1, 1), paths(1, 2));
        devices.push_back({std::move(ppc), 0});
        devices.push_back({std::move(spc), 0});
        if (two_copies) {
            for (int p = 2; p < n; ++p) devices.push_back({build_spm(table, paths(p, 2)), 0});
        }

        std::size_t offset = 0;
        for (auto& slice : devices) {
            slice.first = offset;
            auto dm = slice.device.layout.detector_modes();
            all_detector_modes.insert(all_detector_modes.end(), dm.begin(), dm.end());
            offset += dm.size();
        }
    }

    // Mapping from the post-measurement table onto the canonical copy-1
    // table (Bob's kept copy-2 d path takes over his d slot, Eq.-2 style
    // renaming after the SPC).
    std::map<ModeId, ModeId> final_remap(const ModeTable& reduced) const {
        std::map<ModeId, ModeId> map;
        for (const auto& m : reduced.modes()) {
            if (m.party == 1 && m.copy == 2 && m.spatial == Spatial::Down) {
                map[m] = ModeId{1, 1, Spatial::Down, m.pol, 0};
            } else if (m.copy == 1) {
                map[m] = m;
            }
        }
        return map;
    }
};

// Flip the sign of every term where party 0's copy-1 photon matches the
// predicate; this is sigma_z on one party.
FockState apply_sigma_z(const FockState& s, bool flip_pol, bool flip_spatial) {
    const auto& table = *s.table();
    FockState out(s.table());
    for (const auto& [occ, amp] : s.terms()) {
        double sign = 1.0;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (occ[i] == 0) continue;
            const ModeId& m = table.mode(i);
            if (m.party != 0) continue;
            if (flip_pol && m.pol == Pol::V) sign = -sign;
            if (flip_spatial && m.spatial == Spatial::Down) sign = -sign;
        }
        out.add_term(occ, sign * amp);
    }
    return out;
}

// Read P and Q off the collapsed state's term signs. Requires the
// four-term GHZxGHZ structure; returns false otherwise.
bool classify_from_state(const FockState& s, int n_parties, int& P, int& Q) {
    if (s.terms().size() != 4) return false;
    const auto& table = *s.table();

    auto key = [&](Pol pol, Spatial sp) {
        OccupationVector occ(table.size(), 0);
        for (int p = 0; p < n_parties; ++p) occ[table.index_of(ModeId{p, 1, sp, pol, 0})] = 1;
        return occ;
    };
    auto hu = s.terms().find(key(Pol::H, Spatial::Up));
    auto vu = s.terms().find(key(Pol::V, Spatial::Up));
    auto hd = s.terms().find(key(Pol::H, Spatial::Down));
    auto vd = s.terms().find(key(Pol::V, Spatial::Down));
    if (hu == s.terms().end() || vu == s.terms().end() || hd == s.terms().end() ||
        vd == s.terms().end()) {
        return false;
    }
    for (auto it : {hu, vu, hd, vd}) {
        if (std::abs(std::abs(it->second) - 0.5) > 1e-9) return false;
    }
    const Complex phase = hu->second / std::abs(hu->second);
    auto sign_of = [&](Complex amp) {
        Complex r = amp / phase;
        if (std::abs(r.imag()) > 1e-9) return 0;
        return r.real() > 0 ? 1 : -1;
    };
    const int sv = sign_of(vu->second);
    const int sd = sign_of(hd->second);
    const int svd = sign_of(vd->second);
    if (sv == 0 || sd == 0 || svd == 0) return false;
    if (svd != sv * sd) return false;
    P = sv < 0 ? 1 : 0;
    Q = sd < 0 ? 1 : 0;
    return true;
}

}  // namespace

RunReport run_exact(const ProtocolConfig& config) {
    Engine eng(config);
    const FockState out = apply_circuit(
        [&] {
            OpticalCircuit c = identity_circuit(eng.table);
            for (const auto& slice : eng.devices) c = compose(c, slice.device.circuit);
            return c;
        }(),
        eng.joint);

    std::vector<std::size_t> det_idx;
    for (const auto& m : eng.all_detector_modes) det_idx.push_back(eng.table->index_of(m));
    std::vector<bool> measured(eng.table->size(), false);
    for (auto i : det_idx) measured[i] = true;
    const auto reduced_table = eng.table->without(det_idx);

    // Branches: one per distinct detector count pattern, lexicographic.
    // Single pass splits every term into (pattern, remainder) at once.
    std::map<OccupationVector, std::map<OccupationVector, Complex>> patterns;
    for (const auto& [occ, amp] : out.terms()) {
        OccupationVector pat(det_idx.size());
        for (std::size_t k = 0; k < det_idx.size(); ++k) pat[k] = occ[det_idx[k]];
        OccupationVector rest;
        rest.reserve(reduced_table->size());
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (!measured[i]) rest.push_back(occ[i]);
        }
        patterns[pat][rest] += amp;
    }

    RunReport report;
    report.config = config;
    report.formula_probability = success_formula(config.params);
    report.final_table = ModeTable::protocol(config.n_parties, {1});
    report.target = target_state(config.n_parties);

    int branch_id = 0;
    for (const auto& [pat, rest_terms] : patterns) {
        std::vector<int> pattern(pat.begin(), pat.end());
        ProjectionResult proj{0.0, FockState(reduced_table)};
        for (const auto& [rest, amp] : rest_terms) {
            proj.probability += std::norm(amp);
            proj.remainder.add_term(rest, amp);
        }
        if (proj.probability <= 0.0) continue;
        proj.remainder = proj.remainder.normalized();

        BranchOutcome br;
        br.branch_id = branch_id++;
        br.pattern = pattern;
        br.probability = proj.probability;

        bool all_accept = true;
        bool any_ambiguous = false;
        for (const auto& slice : eng.devices) {
            const auto n_det = slice.device.layout.detectors.size();
            std::vector<int> counts(pattern.begin() + slice.first,
                                    pattern.begin() + slice.first + n_det);
            DetectionEvent ev =
                classify_event(slice.device.layout, config.detector_model, counts);
            br.detections.push_back(DeviceRecord{slice.device.name, counts, ev.classification,
                                                 ev.ambiguous, ev.outcome});
            if (ev.classification != Classification::Accept) all_accept = false;
            if (ev.ambiguous) any_ambiguous = true;
        }
        br.accepted = all_accept;
        br.ambiguous = any_ambiguous;

        if (br.accepted) {
            // Survivor state over the canonical copy-1 table.
            FockState collapsed = remap_modes(proj.remainder,
                                              eng.final_remap(*proj.remainder.table()),
                                              report.final_table);

            // Eq.-12 bits from the two parity-check outcomes.
            const auto& ppc_out = br.detections[0].outcome;
            const auto& spc_out = br.detections[1].outcome;
            if (ppc_out && spc_out) {
                br.p = (ppc_out->pol_sign == spc_out->pol_sign) ? 0 : 1;
                br.q = (ppc_out->spatial_sign == spc_out->spatial_sign) ? 0 : 1;
            }
            // Parity-of-outcomes rule over every measured copy-2 photon.
            int minus_pol = 0, minus_spatial = 0;
            for (const auto& rec : br.detections) {
                if (!rec.outcome) continue;
                if (rec.outcome->pol_sign < 0) ++minus_pol;
                if (rec.outcome->spatial_sign < 0) ++minus_spatial;
            }
            br.P_rule = minus_pol % 2;
            br.Q_rule = minus_spatial % 2;

            br.rule_consistent = classify_from_state(collapsed, config.n_parties, br.P, br.Q) &&
                                 br.P == br.P_rule && br.Q == br.Q_rule;
            br.sigma_z_polarization = br.P == 1;
            br.sigma_z_spatial = br.Q == 1;
            br.collapsed = apply_sigma_z(collapsed, br.sigma_z_polarization, br.sigma_z_spatial);
            br.fidelity_after_correction = fidelity(br.collapsed, report.target);

            if (br.ambiguous) {
                report.false_accept_probability += br.probability;
            } else {
                report.success_probability += br.probability;
            }
        }
        report.total_probability += br.probability;
        report.branches.push_back(std::move(br));
    }
    return report;
}

ShotReport run_shots(const ProtocolConfig& config, long shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shot count must be >= 1");
    ShotReport sr;
    sr.exact = run_exact(config);
    sr.shots = shots;
    sr.seed = seed;

    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& br : sr.exact.branches) {
        acc += br.probability;
        cdf.push_back(acc);
    }

    std::mt19937_64 rng(seed);
    for (long s = 0; s < shots; ++s) {
        // 53-bit uniform in [0, 1); fully determined by the seed.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t k = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        ++sr.branch_frequency[sr.exact.branches[k].branch_id];
        if (sr.exact.branches[k].accepted && !sr.exact.branches[k].ambiguous) ++sr.accept_count;
    }
    sr.empirical_rate = static_cast<double>(sr.accept_count) / static_cast<double>(shots);
    return sr;
}

namespace {

nlohmann::json branch_to_json(const BranchOutcome& br) {
    nlohmann::json b;
    b["branch_id"] = br.branch_id;
    b["pattern"] = br.pattern;
    b["probability"] = br.probability;
    b["accepted"] = br.accepted;
    b["ambiguous"] = br.ambiguous;
    auto dets = nlohmann::json::array();
    for (const auto& rec : br.detections) {
        nlohmann::json d;
        d["device"] = rec.device;
        d["counts"] = rec.counts;
        d["accept"] = rec.classification == Classification::Accept;
        if (rec.outcome) d["outcome"] = rec.outcome->tag();
        dets.push_back(std::move(d));
    }
    b["detections"] = std::move(dets);
    if (br.accepted) {
        b["p"] = br.p;
        b["q"] = br.q;
        b["P"] = br.P;
        b["Q"] = br.Q;
        b["P_rule"] = br.P_rule;
        b["Q_rule"] = br.Q_rule;
        b["rule_consistent"] = br.rule_consistent;
        b["sigma_z_polarization"] = br.sigma_z_polarization;
        b["sigma_z_spatial"] = br.sigma_z_spatial;
        b["fidelity_after_correction"] = br.fidelity_after_correction;
        b["collapsed"] = nlohmann::json::parse(to_json(br.collapsed));
    }
    return b;
}

nlohmann::json config_to_json(const ProtocolConfig& c) {
    nlohmann::json j;
    j["n"] = c.n_parties;
    j["alpha2"] = std::norm(c.params.alpha);
    j["delta2"] = std::norm(c.params.delta);
    j["detector"] = c.detector_model == DetectorModel::PNR ? "pnr" : "bucket";
    j["ppc"] = c.ppc_variant == PpcVariant::Plain ? "plain" : "improved";
    j["variant"] = c.variant == ProtocolVariant::TwoCopies ? "two-copies" : "auxiliary";
    return j;
}

}  // namespace

std::string report_json(const RunReport& r) {
    nlohmann::json j;
    j["config"] = config_to_json(r.config);
    j["success_probability"] = r.success_probability;
    j["formula_probability"] = r.formula_probability;
    j["false_accept_probability"] = r.false_accept_probability;
    j["total_probability"] = r.total_probability;
    auto arr = nlohmann::json::array();
    for (const auto& br : r.branches) arr.push_back(branch_to_json(br));
    j["branches"] = std::move(arr);
    return j.dump(2);
}

std::string shot_report_json(const ShotReport& r) {
    nlohmann::json j;
    j["config"] = config_to_json(r.exact.config);
    j["shots"] = r.shots;
    j["seed"] = r.seed;
    j["accept_count"] = r.accept_count;
    j["empirical_rate"] = r.empirical_rate;
    j["exact_rate"] = r.exact.success_probability;
    nlohmann::json freq = nlohmann::json::object();
    for (const auto& [id, n] : r.branch_frequency) freq[std::to_string(id)] = n;
    j["branch_frequency"] = std::move(freq);
    return j.dump(2);
}

}  // namespace hyperconc
