// fock.hpp
// Sparse multi-photon Fock states over a fixed table of optical modes.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hyperconc {

using Complex = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-12;

enum class Spatial : std::uint8_t { Up, Down };
enum class Pol : std::uint8_t { H, V };

// Physical label of one optical mode: which party's photon, which copy of
// the shared state, which spatial path and which polarization slot.
// aux > 0 marks an ancilla path attached to the same party/copy (used by
// the improved parity-check devices for extra detector arms).
struct ModeId {
    int party = 0;        // 0-based party index (a, b, c, ...)
    int copy = 1;         // 1 or 2
    Spatial spatial = Spatial::Up;
    Pol pol = Pol::H;
    int aux = 0;

    auto operator<=>(const ModeId&) const = default;

    std::string label() const;
};

// A spatial path is a mode pair (H and V slot) sharing party/copy/spatial.
struct Path {
    int party = 0;
    int copy = 1;
    Spatial spatial = Spatial::Up;
    int aux = 0;

    auto operator<=>(const Path&) const = default;

    ModeId mode(Pol p) const { return ModeId{party, copy, spatial, p, aux}; }
    std::string label() const;
};

// Dense, immutable mode index. Flattening order for protocol tables is
// party-major, then copy, then spatial (u before d), then polarization
// (H before V); ancilla paths are appended after all regular modes.
class ModeTable {
public:
    explicit ModeTable(std::vector<ModeId> modes);

    // All parties x given copies x {u,d} x {H,V} in canonical order.
    static std::shared_ptr<const ModeTable> protocol(int n_parties,
                                                     std::vector<int> copies = {1, 2});

    std::size_t size() const { return modes_.size(); }
    const ModeId& mode(std::size_t i) const { return modes_.at(i); }
    const std::vector<ModeId>& modes() const { return modes_; }

    bool contains(const ModeId& m) const;
    std::size_t index_of(const ModeId& m) const;  // throws if absent

    // Table with the given flat indices removed; remaining modes keep their
    // relative order. parent_index() records where each survivor came from.
    std::shared_ptr<const ModeTable> without(const std::vector<std::size_t>& removed) const;

    // Index in the parent table this mode was copied from (identity for
    // tables built directly). Traceability for post-measurement reindexing.
    const std::vector<std::size_t>& parent_indices() const { return parent_; }

    std::vector<std::string> labels() const;

private:
    std::vector<ModeId> modes_;
    std::map<ModeId, std::size_t> index_;
    std::vector<std::size_t> parent_;
};

using ModeTablePtr = std::shared_ptr<const ModeTable>;

// Photon counts per mode; map key with element-wise equality and
// lexicographic ordering (which fixes canonical serialization order).
using OccupationVector = std::vector<std::uint8_t>;

int total_photons(const OccupationVector& occ);

// Input-state coefficients (alpha, beta) for polarization and
// (delta, eta) for the spatial mode, each pair normalized.
struct StateParams {
    Complex alpha, beta, delta, eta;

    static StateParams from_squares(double alpha2, double delta2);
    void validate() const;  // throws if either pair is not normalized
};

// Sparse superposition of occupation-vector kets over one ModeTable.
// Kets are orthonormal; sqrt(n!) factors live in circuit application and
// the permanent oracle, never in stored amplitudes. Value type: operations
// return new states, nothing mutates a shared one.
class FockState {
public:
    FockState() = default;  // no table; assign before use
    explicit FockState(ModeTablePtr table) : table_(std::move(table)) {}

    static FockState basis(ModeTablePtr table, OccupationVector occ);

    const ModeTablePtr& table() const { return table_; }
    const std::map<OccupationVector, Complex>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    // Uniform total photon count across terms; -1 for the empty state.
    int photon_count() const;

    double norm2() const;
    FockState normalized() const;
    bool is_normalized(double tol = 1e-12) const;

    // Accumulate one term; drops the entry if it falls under the prune
    // threshold. Enforces photon-number homogeneity.
    void add_term(const OccupationVector& occ, Complex amp);

    FockState scaled(Complex c) const;

private:
    ModeTablePtr table_;
    std::map<OccupationVector, Complex> terms_;
};

// ca*a + cb*b, pruned, not renormalized.
FockState superpose(const FockState& a, Complex ca, const FockState& b, Complex cb);

Complex inner_product(const FockState& a, const FockState& b);

// |<a|b>|^2 for normalized inputs.
double fidelity(const FockState& a, const FockState& b);

struct ProjectionResult {
    double probability = 0.0;
    FockState remainder;  // measured modes removed from the table, renormalized
};

// Project onto the component whose counts on `modes` equal `pattern`,
// then drop those modes from the table.
ProjectionResult project_counts(const FockState& s,
                                const std::vector<ModeId>& modes,
                                const std::vector<int>& pattern);

// Tensor product of states living on disjoint-label tables; the result is
// expressed over `joint`, which must contain every mode of both inputs.
FockState tensor_product(const FockState& a, const FockState& b, ModeTablePtr joint);

// Re-express `s` over `target`, mapping each mode through `mode_map`
// (old ModeId -> new ModeId). Modes absent from the map must be empty in
// every term.
FockState remap_modes(const FockState& s, const std::map<ModeId, ModeId>& mode_map,
                      ModeTablePtr target);

std::string to_json(const FockState& s);

}  // namespace hyperconc
