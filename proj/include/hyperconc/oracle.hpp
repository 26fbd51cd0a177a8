// oracle.hpp
// Brute-force reference for bosonic transition amplitudes via the matrix
// permanent. Deliberately shares no expansion code with optics.

#pragma once

#include <Eigen/Dense>

#include "hyperconc/fock.hpp"

namespace hyperconc::oracle {

// Ryser's inclusion-exclusion formula with Gray-code updates; n <= 12.
Complex permanent(const Eigen::MatrixXcd& a);

// <output_occ| U |input_occ> = Per(U_sub) / sqrt(prod n_i! prod m_j!),
// with U_sub's columns repeated per input occupancy and rows per output.
Complex transition_amplitude(const Eigen::MatrixXcd& unitary,
                             const OccupationVector& input_occ,
                             const OccupationVector& output_occ);

// All occupation vectors of `modes` modes summing to `photons`,
// lexicographic order.
std::vector<OccupationVector> enumerate_occupations(std::size_t modes, int photons);

}  // namespace hyperconc::oracle
