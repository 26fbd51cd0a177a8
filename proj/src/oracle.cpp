#include "hyperconc/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace hyperconc::oracle {

Complex permanent(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("permanent needs a square matrix");
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 1.0;
    if (n > 12) throw std::invalid_argument("permanent capped at n <= 12");

    // Ryser: Per(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} A_ij.
    // Gray-code traversal updates the row sums by one column per step.
    std::vector<Complex> row_sums(n, Complex{});
    Complex total{};
    std::uint32_t gray_prev = 0;
    const std::uint32_t limit = 1u << n;
    for (std::uint32_t k = 1; k < limit; ++k) {
        const std::uint32_t gray = k ^ (k >> 1);
        const std::uint32_t changed = gray ^ gray_prev;
        const int j = std::countr_zero(changed);
        const double sign_col = (gray & changed) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) row_sums[i] += sign_col * a(i, j);
        gray_prev = gray;

        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= row_sums[i];
        const int popcount = std::popcount(gray);
        total += ((popcount % 2 == 0) ? 1.0 : -1.0) * prod;
    }
    return ((n % 2 == 0) ? 1.0 : -1.0) * total;
}

Complex transition_amplitude(const Eigen::MatrixXcd& unitary, const OccupationVector& input_occ,
                             const OccupationVector& output_occ) {
    const auto m = static_cast<std::size_t>(unitary.rows());
    if (input_occ.size() != m || output_occ.size() != m) {
        throw std::invalid_argument("occupation length does not match unitary dimension");
    }
    const int n_in = total_photons(input_occ);
    const int n_out = total_photons(output_occ);
    if (n_in != n_out) throw std::invalid_argument("photon totals differ");

    std::vector<int> col_modes, row_modes;
    for (std::size_t j = 0; j < m; ++j) {
        for (int r = 0; r < input_occ[j]; ++r) col_modes.push_back(static_cast<int>(j));
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (int r = 0; r < output_occ[i]; ++r) row_modes.push_back(static_cast<int>(i));
    }

    Eigen::MatrixXcd sub(n_in, n_in);
    for (int r = 0; r < n_in; ++r) {
        for (int c = 0; c < n_in; ++c) sub(r, c) = unitary(row_modes[r], col_modes[c]);
    }

    double fac = 1.0;
    for (auto v : input_occ) {
        for (int k = 2; k <= v; ++k) fac *= k;
    }
    for (auto v : output_occ) {
        for (int k = 2; k <= v; ++k) fac *= k;
    }
    return permanent(sub) / std::sqrt(fac);
}

std::vector<OccupationVector> enumerate_occupations(std::size_t modes, int photons) {
    std::vector<OccupationVector> out;
    OccupationVector cur(modes, 0);
    // Recursive lexicographic fill.
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == modes) {
            cur[pos] = static_cast<std::uint8_t>(left);
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            cur[pos] = static_cast<std::uint8_t>(c);
            self(self, pos + 1, left - c);
        }
    };
    if (modes == 0) return out;
    rec(rec, 0, photons);
    return out;
}

}  // namespace hyperconc::oracle
