#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "hyperconc/devices.hpp"
#include "hyperconc/truth_tables.hpp"

using namespace hyperconc;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::array<Path, 2> paths(int copy, int aux = 0) {
    return {Path{0, copy, Spatial::Up, aux}, Path{0, copy, Spatial::Down, aux}};
}

ModeTablePtr device_table() { return ModeTable::protocol(1, {1, 2}); }

ModeTablePtr improved_table() {
    std::vector<ModeId> modes = device_table()->modes();
    for (const Path& p : paths(2, 1)) {
        modes.push_back(p.mode(Pol::H));
        modes.push_back(p.mode(Pol::V));
    }
    return std::make_shared<ModeTable>(std::move(modes));
}

// Photon with polarization state c_h|H> + c_v|V> spread over both paths of
// one copy with spatial amplitudes (s_u, s_d).
FockState one_photon(ModeTablePtr t, int copy, Complex c_h, Complex c_v, Complex s_u,
                     Complex s_d) {
    FockState s(t);
    const std::pair<Pol, Complex> pols[]{{Pol::H, c_h}, {Pol::V, c_v}};
    const std::pair<Spatial, Complex> spats[]{{Spatial::Up, s_u}, {Spatial::Down, s_d}};
    for (const auto& [pol, cp] : pols) {
        for (const auto& [sp, cs] : spats) {
            if (std::abs(cp * cs) == 0.0) continue;
            OccupationVector occ(t->size(), 0);
            occ[t->index_of(ModeId{0, copy, sp, pol, 0})] = 1;
            s.add_term(occ, cp * cs);
        }
    }
    return s;
}

FockState pol_product(ModeTablePtr t, Pol p1, Pol p2) {
    return tensor_product(one_photon(t, 1, p1 == Pol::H ? 1.0 : 0.0, p1 == Pol::V ? 1.0 : 0.0,
                                     kInvSqrt2, kInvSqrt2),
                          one_photon(t, 2, p2 == Pol::H ? 1.0 : 0.0, p2 == Pol::V ? 1.0 : 0.0,
                                     kInvSqrt2, kInvSqrt2),
                          t);
}

// Distribution of detector-side photon totals after the device circuit.
std::map<int, double> detector_count_distribution(const Device& dev, const FockState& in) {
    const FockState out = apply_circuit(dev.circuit, in);
    std::vector<std::size_t> det_idx;
    for (const auto& m : dev.layout.detector_modes()) {
        det_idx.push_back(dev.circuit.table->index_of(m));
    }
    std::map<int, double> dist;
    for (const auto& [occ, amp] : out.terms()) {
        int n = 0;
        for (auto i : det_idx) n += occ[i];
        dist[n] += std::norm(amp);
    }
    return dist;
}

// Probability-weighted classified events of a device for a given input.
std::map<OccupationVector, double> event_probs(const Device& dev, const FockState& in) {
    const FockState out = apply_circuit(dev.circuit, in);
    std::vector<std::size_t> det_idx;
    for (const auto& m : dev.layout.detector_modes()) {
        det_idx.push_back(dev.circuit.table->index_of(m));
    }
    std::map<OccupationVector, double> events;
    for (const auto& [occ, amp] : out.terms()) {
        OccupationVector pat(det_idx.size());
        for (std::size_t k = 0; k < det_idx.size(); ++k) pat[k] = occ[det_idx[k]];
        events[pat] += std::norm(amp);
    }
    return events;
}

double accept_probability(const Device& dev, const FockState& in, DetectorModel model,
                          bool false_accepts_only = false) {
    double p = 0.0;
    for (const auto& [pat, prob] : event_probs(dev, in)) {
        std::vector<int> counts(pat.begin(), pat.end());
        const DetectionEvent ev = classify_event(dev.layout, model, counts);
        if (ev.classification != Classification::Accept) continue;
        if (false_accepts_only ? ev.ambiguous : !ev.ambiguous) p += prob;
    }
    return p;
}
}  // namespace

TEST_CASE("PPC routes the four polarization products per the parity rule") {
    auto t = device_table();
    Device ppc = build_ppc(t, paths(1), paths(2));

    // |HH>: one detector-side photon in every term.
    auto hh = detector_count_distribution(ppc, pol_product(t, Pol::H, Pol::H));
    CHECK(hh.size() == 1);
    CHECK(hh.at(1) == doctest::Approx(1.0));

    // |HV>: both photons exit port 1.
    auto hv = detector_count_distribution(ppc, pol_product(t, Pol::H, Pol::V));
    CHECK(hv.size() == 1);
    CHECK(hv.at(0) == doctest::Approx(1.0));

    // |VH>: both photons to the detectors.
    auto vh = detector_count_distribution(ppc, pol_product(t, Pol::V, Pol::H));
    CHECK(vh.size() == 1);
    CHECK(vh.at(2) == doctest::Approx(1.0));

    auto vv = detector_count_distribution(ppc, pol_product(t, Pol::V, Pol::V));
    CHECK(vv.at(1) == doctest::Approx(1.0));
}

TEST_CASE("PPC parity law: accept probability equals the even-parity weight") {
    auto t = device_table();
    Device ppc = build_ppc(t, paths(1), paths(2));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int rep = 0; rep < 8; ++rep) {
        const double a = unif(rng), b = unif(rng);
        auto photon1 = one_photon(t, 1, std::sqrt(a), std::sqrt(1 - a), kInvSqrt2, kInvSqrt2);
        auto photon2 = one_photon(t, 2, std::sqrt(b), std::sqrt(1 - b), kInvSqrt2, kInvSqrt2);
        auto in = tensor_product(photon1, photon2, t);
        const double even_weight = a * b + (1 - a) * (1 - b);
        CHECK(accept_probability(ppc, in, DetectorModel::PNR) ==
              doctest::Approx(even_weight).epsilon(1e-10));
    }
}

TEST_CASE("improved PPC separates polarization-distinct pairs deterministically") {
    auto t = improved_table();
    Device ippc = build_improved_ppc(t, paths(1), paths(2), paths(2, 1));

    // |VH>: never two photons on one detector.
    for (const auto& [pat, prob] : event_probs(ippc, pol_product(t, Pol::V, Pol::H))) {
        (void)prob;
        for (auto c : pat) CHECK(c <= 1);
    }
    // Bucket false accepts vanish for the polarization-distinct class.
    CHECK(accept_probability(ippc, pol_product(t, Pol::V, Pol::H), DetectorModel::Bucket,
                             true) == doctest::Approx(0.0));
}

TEST_CASE("improved PPC accept probability matches the plain device") {
    auto t1 = device_table();
    auto t2 = improved_table();
    Device ppc = build_ppc(t1, paths(1), paths(2));
    Device ippc = build_improved_ppc(t2, paths(1), paths(2), paths(2, 1));
    for (Pol a : {Pol::H, Pol::V}) {
        for (Pol b : {Pol::H, Pol::V}) {
            CHECK(accept_probability(ppc, pol_product(t1, a, b), DetectorModel::PNR) ==
                  doctest::Approx(
                      accept_probability(ippc, pol_product(t2, a, b), DetectorModel::PNR)));
        }
    }
}

TEST_CASE("improved PPC bucket false accepts are a subset of the plain device's") {
    auto t1 = device_table();
    auto t2 = improved_table();
    Device ppc = build_ppc(t1, paths(1), paths(2));
    Device ippc = build_improved_ppc(t2, paths(1), paths(2), paths(2, 1));
    for (Pol a : {Pol::H, Pol::V}) {
        for (Pol b : {Pol::H, Pol::V}) {
            const double plain =
                accept_probability(ppc, pol_product(t1, a, b), DetectorModel::Bucket, true);
            const double improved =
                accept_probability(ippc, pol_product(t2, a, b), DetectorModel::Bucket, true);
            CHECK(improved <= plain + 1e-12);
        }
    }
}

TEST_CASE("SPC routing follows the spatial parity of the inputs") {
    auto t = device_table();
    Device spc = build_spc(t, paths(1), paths(2));
    auto spatial_input = [&](Spatial s1, Spatial s2) {
        OccupationVector occ(t->size(), 0);
        occ[t->index_of(ModeId{0, 1, s1, Pol::H, 0})] = 1;
        occ[t->index_of(ModeId{0, 2, s2, Pol::H, 0})] = 1;
        return FockState::basis(t, occ);
    };
    // same spatial modes: one kept, one detected
    auto uu = detector_count_distribution(spc, spatial_input(Spatial::Up, Spatial::Up));
    CHECK(uu.at(1) == doctest::Approx(1.0));
    auto dd = detector_count_distribution(spc, spatial_input(Spatial::Down, Spatial::Down));
    CHECK(dd.at(1) == doctest::Approx(1.0));
    // odd parity: both port 1 or both detected
    auto ud = detector_count_distribution(spc, spatial_input(Spatial::Up, Spatial::Down));
    CHECK(ud.at(0) == doctest::Approx(1.0));
    auto du = detector_count_distribution(spc, spatial_input(Spatial::Down, Spatial::Up));
    CHECK(du.at(2) == doctest::Approx(1.0));
    // parity law under PNR
    CHECK(accept_probability(spc, spatial_input(Spatial::Up, Spatial::Down),
                             DetectorModel::PNR) == doctest::Approx(0.0));
}

TEST_CASE("SPM: diagonal eigenstate fires a single detector") {
    auto t = ModeTable::protocol(1, {1});
    Device spm = build_spm(t, paths(1));
    // |+> x |+'>
    FockState in(t);
    for (Spatial sp : {Spatial::Up, Spatial::Down}) {
        for (Pol pol : {Pol::H, Pol::V}) {
            OccupationVector occ(t->size(), 0);
            occ[t->index_of(ModeId{0, 1, sp, pol, 0})] = 1;
            in.add_term(occ, 0.5);
        }
    }
    auto probs = spm_outcomes(spm, in);
    double total = 0.0;
    for (const auto& [det, p] : probs) {
        total += p;
        if (det.spatial_sign > 0 && det.pol_sign > 0) {
            CHECK(p == doctest::Approx(1.0));
        } else {
            CHECK(p == doctest::Approx(0.0));
        }
    }
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("SPM: |H>|u> spreads evenly over all four detectors") {
    auto t = ModeTable::protocol(1, {1});
    Device spm = build_spm(t, paths(1));
    OccupationVector occ(t->size(), 0);
    occ[t->index_of(ModeId{0, 1, Spatial::Up, Pol::H, 0})] = 1;
    for (const auto& [det, p] : spm_outcomes(spm, FockState::basis(t, occ))) {
        (void)det;
        CHECK(p == doctest::Approx(0.25));
    }
}

TEST_CASE("SPM completeness for random single-photon inputs") {
    auto t = ModeTable::protocol(1, {1});
    Device spm = build_spm(t, paths(1));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        FockState s(t);
        for (std::size_t i = 0; i < t->size(); ++i) {
            OccupationVector occ(t->size(), 0);
            occ[i] = 1;
            s.add_term(occ, Complex(unif(rng), unif(rng)));
        }
        s = s.normalized();
        double total = 0.0;
        for (const auto& [det, p] : spm_outcomes(spm, s)) {
            (void)det;
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("SPM rejects multi-photon input") {
    auto t = ModeTable::protocol(1, {1});
    Device spm = build_spm(t, paths(1));
    OccupationVector occ(t->size(), 0);
    occ[0] = 2;
    CHECK_THROWS_AS(spm_outcomes(spm, FockState::basis(t, occ)), std::invalid_argument);
}

TEST_CASE("classify_event signatures") {
    auto t = ModeTable::protocol(1, {1});
    Device spm = build_spm(t, paths(1));
    auto pnr = classify_event(spm.layout, DetectorModel::PNR, {1, 0, 0, 0});
    CHECK(pnr.classification == Classification::Accept);
    REQUIRE(pnr.outcome.has_value());
    CHECK(pnr.outcome->mode == spm.layout.detectors[0].mode);

    CHECK(classify_event(spm.layout, DetectorModel::PNR, {2, 0, 0, 0}).classification ==
          Classification::Reject);

    auto bucket = classify_event(spm.layout, DetectorModel::Bucket, {2, 0, 0, 0});
    CHECK(bucket.classification == Classification::Accept);
    CHECK(bucket.ambiguous);

    CHECK(classify_event(spm.layout, DetectorModel::Bucket, {1, 1, 0, 0}).classification ==
          Classification::Reject);
    CHECK_THROWS_AS(classify_event(spm.layout, DetectorModel::PNR, {1, 0}),
                    std::invalid_argument);
}

TEST_CASE("device circuits are unitary and builders reject path collisions") {
    auto t = device_table();
    CHECK(is_unitary(build_ppc(t, paths(1), paths(2)).circuit.unitary));
    CHECK(is_unitary(build_spc(t, paths(1), paths(2)).circuit.unitary));
    auto t2 = improved_table();
    CHECK(is_unitary(build_improved_ppc(t2, paths(1), paths(2), paths(2, 1)).circuit.unitary));
    CHECK_THROWS_AS(build_ppc(t, paths(1), paths(1)), std::invalid_argument);
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}
}  // namespace

TEST_CASE("golden files: comparator routing and device tables") {
    const std::string dir = GOLDEN_DIR;
    CHECK(ppc_routing_json() + "\n" == read_file(dir + "/ppc_routing.json"));
    CHECK(device_tables_json(DetectorModel::PNR) + "\n" ==
          read_file(dir + "/device_tables_pnr.json"));
    CHECK(device_tables_json(DetectorModel::Bucket) + "\n" ==
          read_file(dir + "/device_tables_bucket.json"));
}
