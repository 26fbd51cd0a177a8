// verify.hpp
// Randomized cross-check of circuit application against the permanent oracle.

#pragma once

#include <cstdint>

#include "hyperconc/fock.hpp"

namespace hyperconc {

struct VerifyResult {
    int trials = 0;
    double max_amplitude_deviation = 0.0;  // expansion vs oracle, worst amplitude
    double max_completeness_defect = 0.0;  // worst |sum of probabilities - 1|
};

// Random Haar unitaries over <= max_modes modes applied to random input
// occupations of <= max_photons photons; every output amplitude is
// compared against the permanent formula.
VerifyResult verify_against_oracle(int trials, std::uint64_t seed, int max_modes = 8,
                                   int max_photons = 4);

std::string verify_json(const VerifyResult& r);

}  // namespace hyperconc
