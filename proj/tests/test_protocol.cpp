#include "doctest.h"

#include <cmath>
#include <random>

#include "hyperconc/protocol.hpp"

using namespace hyperconc;

namespace {
ProtocolConfig config(int n, double alpha2, double delta2) {
    ProtocolConfig cfg;
    cfg.n_parties = n;
    cfg.params = StateParams::from_squares(alpha2, delta2);
    return cfg;
}
}  // namespace

TEST_CASE("success formula is 4|alpha beta delta eta|^2") {
    CHECK(success_formula(StateParams::from_squares(0.5, 0.5)) == doctest::Approx(0.25));
    CHECK(success_formula(StateParams::from_squares(0.3, 0.7)) ==
          doctest::Approx(4.0 * 0.3 * 0.7 * 0.7 * 0.3));
    CHECK(success_formula(StateParams::from_squares(1.0, 0.5)) == doctest::Approx(0.0));
}

TEST_CASE("build_input has the four-term product structure") {
    const auto params = StateParams::from_squares(0.3, 0.6);
    const FockState in = build_input(3, params, 1);
    CHECK(in.terms().size() == 4);
    CHECK(in.photon_count() == 3);
    CHECK(in.is_normalized(1e-12));

    // |HHH>|uuu> term carries alpha*delta.
    auto t = in.table();
    OccupationVector occ(t->size(), 0);
    for (int party = 0; party < 3; ++party) {
        occ[t->index_of(ModeId{party, 1, Spatial::Up, Pol::H, 0})] = 1;
    }
    auto it = in.terms().find(occ);
    REQUIRE(it != in.terms().end());
    CHECK(std::abs(it->second - params.alpha * params.delta) < 1e-14);
}

TEST_CASE("flip_second_copy swaps polarization and spatial labels on copy 2") {
    const auto params = StateParams::from_squares(0.3, 0.6);
    const FockState in = build_input(2, params, 2);
    const FockState flipped = flip_second_copy(in);
    CHECK(flipped.terms().size() == 4);
    CHECK(flipped.is_normalized(1e-12));

    // alpha|HH>|uu> must land on |VV>|dd>.
    auto t = flipped.table();
    OccupationVector occ(t->size(), 0);
    for (int party = 0; party < 2; ++party) {
        occ[t->index_of(ModeId{party, 2, Spatial::Down, Pol::V, 0})] = 1;
    }
    auto it = flipped.terms().find(occ);
    REQUIRE(it != flipped.terms().end());
    CHECK(std::abs(it->second - params.alpha * params.delta) < 1e-14);

    // Flipping twice restores the input.
    CHECK(fidelity(flip_second_copy(flipped), in) == doctest::Approx(1.0));
}

TEST_CASE("balanced N=2 run succeeds with probability 1/4") {
    const RunReport r = run_exact(config(2, 0.5, 0.5));
    CHECK(r.success_probability == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(r.success_probability == doctest::Approx(r.formula_probability).epsilon(1e-10));
    CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.false_accept_probability == doctest::Approx(0.0));
    int accepts = 0;
    for (const auto& b : r.branches) {
        if (!b.accepted) continue;
        ++accepts;
        CHECK(b.fidelity_after_correction == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(b.rule_consistent);
        CHECK(b.P == b.P_rule);
        CHECK(b.Q == b.Q_rule);
    }
    CHECK(accepts == 16);
}

TEST_CASE("N=3 asymmetric run matches the closed form") {
    const RunReport r = run_exact(config(3, 0.2, 0.5));
    CHECK(r.success_probability == doctest::Approx(0.16).epsilon(1e-10));
    CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("success probability does not depend on N") {
    const double p4 = run_exact(config(4, 0.3, 0.7)).success_probability;
    const double p2 = run_exact(config(2, 0.3, 0.7)).success_probability;
    CHECK(p4 == doctest::Approx(p2).epsilon(1e-12));
    CHECK(p4 == doctest::Approx(4.0 * 0.3 * 0.7 * 0.7 * 0.3).epsilon(1e-10));
}

TEST_CASE("degenerate product inputs never pass post-selection") {
    for (auto [a2, d2] : {std::pair{1.0, 0.5}, std::pair{0.5, 1.0}, std::pair{1.0, 1.0}}) {
        const RunReport r = run_exact(config(2, a2, d2));
        CHECK(r.success_probability == doctest::Approx(0.0));
        CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("probability completeness for random parameters and sizes") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (int n = 2; n <= 4; ++n) {
        const RunReport r = run_exact(config(n, unif(rng), unif(rng)));
        CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.success_probability ==
              doctest::Approx(r.formula_probability).epsilon(1e-9));
        for (const auto& b : r.branches) {
            if (b.accepted && !b.ambiguous) {
                CHECK(b.fidelity_after_correction == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("accepted branches carry the four-term GHZxGHZ sign structure") {
    const RunReport r = run_exact(config(2, 0.35, 0.65));
    for (const auto& b : r.branches) {
        if (!b.accepted) continue;
        CHECK(b.rule_consistent);
        // Corrections are determined by the sign bits.
        CHECK(b.sigma_z_polarization == (b.P == 1));
        CHECK(b.sigma_z_spatial == (b.Q == 1));
        CHECK(b.collapsed.terms().size() == 4);
    }
}

TEST_CASE("bucket detectors add false accepts but keep the clean rate") {
    ProtocolConfig cfg = config(2, 0.3, 0.6);
    cfg.detector_model = DetectorModel::Bucket;
    const RunReport r = run_exact(cfg);
    CHECK(r.success_probability == doctest::Approx(r.formula_probability).epsilon(1e-10));
    CHECK(r.false_accept_probability > 0.0);
    CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("improved PPC preserves the success probability") {
    ProtocolConfig cfg = config(2, 0.3, 0.6);
    cfg.ppc_variant = PpcVariant::Improved;
    const RunReport r = run_exact(cfg);
    CHECK(r.success_probability == doctest::Approx(r.formula_probability).epsilon(1e-10));
    CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("auxiliary-photon variant reaches the same rate with unit fidelity") {
    ProtocolConfig cfg = config(3, 0.5, 0.5);
    cfg.variant = ProtocolVariant::Auxiliary;
    const RunReport r = run_exact(cfg);
    CHECK(r.success_probability == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(r.total_probability == doctest::Approx(1.0).epsilon(1e-10));
    for (const auto& b : r.branches) {
        if (b.accepted) {
            CHECK(b.fidelity_after_correction == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("run_shots is reproducible and consistent with the exact rate") {
    ProtocolConfig cfg = config(2, 0.5, 0.5);
    const ShotReport s1 = run_shots(cfg, 2000, 42);
    const ShotReport s2 = run_shots(cfg, 2000, 42);
    CHECK(s1.accept_count == s2.accept_count);
    CHECK(s1.branch_frequency == s2.branch_frequency);
    CHECK(shot_report_json(s1) == shot_report_json(s2));

    const ShotReport s3 = run_shots(cfg, 2000, 43);
    CHECK(s3.seed != s1.seed);

    // 5 sigma around p = 0.25.
    const double sigma = std::sqrt(0.25 * 0.75 / 2000.0);
    CHECK(std::abs(s1.empirical_rate - 0.25) < 5.0 * sigma);

    long total = 0;
    for (const auto& [id, freq] : s1.branch_frequency) {
        (void)id;
        total += freq;
    }
    CHECK(total == 2000);

    const ShotReport one = run_shots(cfg, 1, 7);
    CHECK(one.shots == 1);
    CHECK(one.branch_frequency.size() == 1);
}

TEST_CASE("reports serialize deterministically") {
    const RunReport r = run_exact(config(2, 0.3, 0.6));
    CHECK(report_json(r) == report_json(run_exact(config(2, 0.3, 0.6))));
}

TEST_CASE("config validation rejects bad inputs") {
    CHECK_THROWS_AS(run_exact(config(1, 0.5, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(StateParams::from_squares(-0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(StateParams::from_squares(0.5, 1.2), std::invalid_argument);
}
