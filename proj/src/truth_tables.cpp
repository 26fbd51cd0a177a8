#include "hyperconc/truth_tables.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hyperconc {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::array<Path, 2> photon_paths(int copy) {
    return {Path{0, copy, Spatial::Up, 0}, Path{0, copy, Spatial::Down, 0}};
}

// Photon with the given polarization spread evenly over both paths of one copy.
FockState spread_photon(ModeTablePtr table, int copy, Pol pol) {
    FockState s(table);
    OccupationVector up(table->size(), 0), down(table->size(), 0);
    up[table->index_of(ModeId{0, copy, Spatial::Up, pol, 0})] = 1;
    down[table->index_of(ModeId{0, copy, Spatial::Down, pol, 0})] = 1;
    s.add_term(up, kInvSqrt2);
    s.add_term(down, kInvSqrt2);
    return s;
}

nlohmann::json term_list(const FockState& s) {
    auto arr = nlohmann::json::array();
    for (const auto& [occ, amp] : s.terms()) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            for (int k = 0; k < occ[i]; ++k) labels.push_back(s.table()->mode(i).label());
        }
        arr.push_back({{"modes", labels}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return arr;
}

// Two-photon product input: photon 1 with pol1 over copy-1 paths, photon 2
// with pol2 over copy-2 paths, uniform spatial superpositions.
FockState ppc_input(ModeTablePtr table, Pol pol1, Pol pol2) {
    return tensor_product(spread_photon(table, 1, pol1), spread_photon(table, 2, pol2), table);
}

nlohmann::json device_rows(const Device& dev, const std::vector<std::pair<std::string, FockState>>& inputs,
                           DetectorModel model) {
    auto rows = nlohmann::json::array();
    const auto det_modes = dev.layout.detector_modes();
    std::vector<std::size_t> det_idx, kept_idx;
    for (const auto& m : det_modes) det_idx.push_back(dev.circuit.table->index_of(m));
    for (const auto& m : dev.layout.kept) kept_idx.push_back(dev.circuit.table->index_of(m));

    for (const auto& [name, input] : inputs) {
        const FockState out = apply_circuit(dev.circuit, input);
        std::map<OccupationVector, double> patterns;
        for (const auto& [occ, amp] : out.terms()) {
            OccupationVector pat(det_idx.size());
            for (std::size_t k = 0; k < det_idx.size(); ++k) pat[k] = occ[det_idx[k]];
            patterns[pat] += std::norm(amp);
        }
        auto events = nlohmann::json::array();
        double p_accept = 0.0, p_false_accept = 0.0;
        for (const auto& [pat, prob] : patterns) {
            std::vector<int> counts(pat.begin(), pat.end());
            DetectionEvent ev = classify_event(dev.layout, model, counts);
            nlohmann::json e;
            e["counts"] = counts;
            e["probability"] = prob;
            e["accept"] = ev.classification == Classification::Accept;
            e["ambiguous"] = ev.ambiguous;
            if (ev.outcome) e["outcome"] = ev.outcome->tag();
            events.push_back(std::move(e));
            if (ev.classification == Classification::Accept) {
                if (ev.ambiguous) {
                    p_false_accept += prob;
                } else {
                    p_accept += prob;
                }
            }
        }
        rows.push_back({{"input", name},
                        {"events", std::move(events)},
                        {"p_accept", p_accept},
                        {"p_false_accept", p_false_accept}});
    }
    return rows;
}

std::string pol_name(Pol p) { return p == Pol::H ? "H" : "V"; }

}  // namespace

std::string ppc_routing_json() {
    auto table = ModeTable::protocol(1, {1, 2});
    auto p1 = photon_paths(1), p2 = photon_paths(2);
    OpticalCircuit comparator = circuit_from_elements(
        table, {Element::pbs0(p1[0], p2[0]), Element::pbs0(p1[1], p2[1])});

    auto rows = nlohmann::json::array();
    for (Pol a : {Pol::H, Pol::V}) {
        for (Pol b : {Pol::H, Pol::V}) {
            const FockState out = apply_circuit(comparator, ppc_input(table, a, b));
            rows.push_back({{"input", pol_name(a) + pol_name(b)}, {"terms", term_list(out)}});
        }
    }
    return rows.dump(2);
}

std::string device_tables_json(DetectorModel model) {
    nlohmann::json j;

    {
        auto table = ModeTable::protocol(1, {1, 2});
        Device ppc = build_ppc(table, photon_paths(1), photon_paths(2));
        std::vector<std::pair<std::string, FockState>> inputs;
        for (Pol a : {Pol::H, Pol::V}) {
            for (Pol b : {Pol::H, Pol::V}) {
                inputs.emplace_back(pol_name(a) + pol_name(b), ppc_input(table, a, b));
            }
        }
        j["ppc"] = device_rows(ppc, inputs, model);

        std::vector<ModeId> modes = table->modes();
        std::array<Path, 2> anc{Path{0, 2, Spatial::Up, 1}, Path{0, 2, Spatial::Down, 1}};
        for (const Path& p : anc) {
            modes.push_back(p.mode(Pol::H));
            modes.push_back(p.mode(Pol::V));
        }
        auto table2 = std::make_shared<ModeTable>(std::move(modes));
        Device ippc = build_improved_ppc(table2, photon_paths(1), photon_paths(2), anc);
        std::vector<std::pair<std::string, FockState>> inputs2;
        for (Pol a : {Pol::H, Pol::V}) {
            for (Pol b : {Pol::H, Pol::V}) {
                inputs2.emplace_back(pol_name(a) + pol_name(b), ppc_input(table2, a, b));
            }
        }
        j["ppc_improved"] = device_rows(ippc, inputs2, model);
    }

    {
        auto table = ModeTable::protocol(1, {1, 2});
        Device spc = build_spc(table, photon_paths(1), photon_paths(2));
        std::vector<std::pair<std::string, FockState>> inputs;
        for (Spatial s1 : {Spatial::Up, Spatial::Down}) {
            for (Spatial s2 : {Spatial::Up, Spatial::Down}) {
                OccupationVector occ(table->size(), 0);
                occ[table->index_of(ModeId{0, 1, s1, Pol::H, 0})] = 1;
                occ[table->index_of(ModeId{0, 2, s2, Pol::H, 0})] = 1;
                std::string name = std::string("y1") + (s1 == Spatial::Up ? "u" : "d") +
                                   " y2" + (s2 == Spatial::Up ? "u" : "d");
                inputs.emplace_back(name, FockState::basis(table, occ));
            }
        }
        j["spc"] = device_rows(spc, inputs, model);
    }

    {
        auto table = ModeTable::protocol(1, {1});
        Device spm = build_spm(table, photon_paths(1));
        std::vector<std::pair<std::string, FockState>> inputs;

        OccupationVector occ(table->size(), 0);
        occ[table->index_of(ModeId{0, 1, Spatial::Up, Pol::H, 0})] = 1;
        inputs.emplace_back("H u", FockState::basis(table, occ));

        FockState diag(table);
        for (Spatial sp : {Spatial::Up, Spatial::Down}) {
            for (Pol pol : {Pol::H, Pol::V}) {
                OccupationVector o(table->size(), 0);
                o[table->index_of(ModeId{0, 1, sp, pol, 0})] = 1;
                diag.add_term(o, 0.5);
            }
        }
        inputs.emplace_back("+ +'", diag);
        j["spm"] = device_rows(spm, inputs, model);
    }

    return j.dump(2);
}

std::string device_tables_text(DetectorModel model) {
    const auto j = nlohmann::json::parse(device_tables_json(model));
    std::ostringstream os;
    os << "detector model: " << (model == DetectorModel::PNR ? "PNR" : "bucket") << "\n";
    for (const auto& [device, rows] : j.items()) {
        os << "\n[" << device << "]\n";
        for (const auto& row : rows) {
            os << "  input " << row["input"].get<std::string>() << ":  p_accept="
               << row["p_accept"].get<double>();
            if (row["p_false_accept"].get<double>() > 0) {
                os << "  p_false_accept=" << row["p_false_accept"].get<double>();
            }
            os << "\n";
            for (const auto& ev : row["events"]) {
                os << "    counts [";
                bool first = true;
                for (const auto& c : ev["counts"]) {
                    if (!first) os << " ";
                    os << c.get<int>();
                    first = false;
                }
                os << "]  p=" << ev["probability"].get<double>() << "  "
                   << (ev["accept"].get<bool>() ? "Accept" : "Reject");
                if (ev["ambiguous"].get<bool>()) os << " (ambiguous)";
                if (ev.contains("outcome")) os << "  " << ev["outcome"].get<std::string>();
                os << "\n";
            }
        }
    }
    return os.str();
}

}  // namespace hyperconc
