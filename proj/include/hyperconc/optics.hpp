// optics.hpp
// Linear-optical elements as mode-space unitaries and their action on
// Fock states by creation-operator substitution.

#pragma once

#include <Eigen/Dense>

#include "hyperconc/fock.hpp"

namespace hyperconc {

enum class ElementKind {
    BeamSplitter,     // 50:50, in_u -> (out_u + out_d)/sqrt(2), in_d -> (out_u - out_d)/sqrt(2)
    PBS0,             // transmits V across paths, reflects H within its path
    PBS45,            // diagonal-basis analyzer: H slot carries |+>, V slot carries |->
    HalfWavePlate45,  // swaps H and V on one path
    Relabel,          // mode permutation (listed as swap pairs)
    Phase,            // e^{i theta} on the listed modes
};

std::string element_kind_name(ElementKind k);

// Modes per kind:
//   BeamSplitter:    [up.H, up.V, down.H, down.V]
//   PBS0:            [p1.H, p1.V, p2.H, p2.V]
//   PBS45 / HWP45:   [path.H, path.V]
//   Relabel:         flat list of swap pairs [a0, b0, a1, b1, ...]
//   Phase:           any modes, parameter = theta
struct Element {
    ElementKind kind;
    std::vector<ModeId> modes;
    double parameter = 0.0;

    static Element beam_splitter(Path up, Path down);
    static Element pbs0(Path p1, Path p2);
    static Element pbs45(Path p);
    static Element hwp45(Path p);
    static Element relabel(std::vector<std::pair<ModeId, ModeId>> swaps);
    static Element phase(std::vector<ModeId> modes, double theta);
};

// Full-table embedding of one element: identity outside its acted modes.
Eigen::MatrixXcd element_matrix(const Element& e, const ModeTable& table);

// Mode-space unitary plus the ordered element log that produced it.
struct OpticalCircuit {
    ModeTablePtr table;
    Eigen::MatrixXcd unitary;
    std::vector<Element> elements;
};

OpticalCircuit identity_circuit(ModeTablePtr table);
OpticalCircuit circuit_from_elements(ModeTablePtr table, std::vector<Element> elements);

// b applied after a.
OpticalCircuit compose(const OpticalCircuit& a, const OpticalCircuit& b);

bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-12);

// Substitutes each input creation operator by its image under the circuit
// unitary and collects the expanded polynomial into an output state.
FockState apply_circuit(const OpticalCircuit& c, const FockState& s);

std::string element_log_json(const OpticalCircuit& c);

}  // namespace hyperconc
