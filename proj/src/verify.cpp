#include "hyperconc/verify.hpp"

#include <random>

#include <nlohmann/json.hpp>

#include "hyperconc/optics.hpp"
#include "hyperconc/oracle.hpp"

namespace hyperconc {

VerifyResult verify_against_oracle(int trials, std::uint64_t seed, int max_modes,
                                   int max_photons) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;

    VerifyResult res;
    res.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const int m = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_modes - 1));
        const int photons = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_photons));

        // Haar unitary: QR of a complex Gaussian matrix.
        Eigen::MatrixXcd g(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
        }
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
        Eigen::MatrixXcd u = qr.householderQ();

        std::vector<ModeId> mode_ids;
        for (int i = 0; i < m; ++i) mode_ids.push_back(ModeId{i, 1, Spatial::Up, Pol::H, 0});
        auto table = std::make_shared<ModeTable>(std::move(mode_ids));

        OccupationVector input(static_cast<std::size_t>(m), 0);
        for (int p = 0; p < photons; ++p) ++input[rng() % static_cast<std::uint64_t>(m)];

        OpticalCircuit circuit{table, u, {}};
        const FockState out = apply_circuit(circuit, FockState::basis(table, input));

        double prob_sum = 0.0;
        for (const auto& occ : oracle::enumerate_occupations(static_cast<std::size_t>(m), photons)) {
            const Complex want = oracle::transition_amplitude(u, input, occ);
            prob_sum += std::norm(want);
            auto it = out.terms().find(occ);
            const Complex got = it != out.terms().end() ? it->second : Complex{};
            res.max_amplitude_deviation =
                std::max(res.max_amplitude_deviation, std::abs(got - want));
        }
        res.max_completeness_defect =
            std::max(res.max_completeness_defect, std::abs(prob_sum - 1.0));
    }
    return res;
}

std::string verify_json(const VerifyResult& r) {
    nlohmann::json j;
    j["trials"] = r.trials;
    j["max_amplitude_deviation"] = r.max_amplitude_deviation;
    j["max_completeness_defect"] = r.max_completeness_defect;
    return j.dump(2);
}

}  // namespace hyperconc
