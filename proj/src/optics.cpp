#include "hyperconc/optics.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hyperconc {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

std::string element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::BeamSplitter: return "BS";
        case ElementKind::PBS0: return "PBS0";
        case ElementKind::PBS45: return "PBS45";
        case ElementKind::HalfWavePlate45: return "HWP45";
        case ElementKind::Relabel: return "Relabel";
        case ElementKind::Phase: return "Phase";
    }
    return "?";
}

Element Element::beam_splitter(Path up, Path down) {
    return Element{ElementKind::BeamSplitter,
                   {up.mode(Pol::H), up.mode(Pol::V), down.mode(Pol::H), down.mode(Pol::V)}};
}

Element Element::pbs0(Path p1, Path p2) {
    return Element{ElementKind::PBS0,
                   {p1.mode(Pol::H), p1.mode(Pol::V), p2.mode(Pol::H), p2.mode(Pol::V)}};
}

Element Element::pbs45(Path p) {
    return Element{ElementKind::PBS45, {p.mode(Pol::H), p.mode(Pol::V)}};
}

Element Element::hwp45(Path p) {
    return Element{ElementKind::HalfWavePlate45, {p.mode(Pol::H), p.mode(Pol::V)}};
}

Element Element::relabel(std::vector<std::pair<ModeId, ModeId>> swaps) {
    Element e{ElementKind::Relabel, {}};
    for (auto& [a, b] : swaps) {
        e.modes.push_back(a);
        e.modes.push_back(b);
    }
    return e;
}

Element Element::phase(std::vector<ModeId> modes, double theta) {
    return Element{ElementKind::Phase, std::move(modes), theta};
}

Eigen::MatrixXcd element_matrix(const Element& e, const ModeTable& table) {
    const auto m = static_cast<Eigen::Index>(table.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);

    std::vector<Eigen::Index> idx;
    idx.reserve(e.modes.size());
    for (const auto& mode : e.modes) idx.push_back(static_cast<Eigen::Index>(table.index_of(mode)));

    auto expect_modes = [&](std::size_t n) {
        if (e.modes.size() != n) {
            throw std::invalid_argument(element_kind_name(e.kind) + " expects " +
                                        std::to_string(n) + " modes");
        }
    };

    switch (e.kind) {
        case ElementKind::BeamSplitter: {
            // in_u -> (out_u + out_d)/sqrt(2), in_d -> (out_u - out_d)/sqrt(2),
            // independently per polarization layer.
            expect_modes(4);
            for (int layer = 0; layer < 2; ++layer) {
                Eigen::Index up = idx[layer], down = idx[2 + layer];
                u(up, up) = kInvSqrt2;
                u(down, up) = kInvSqrt2;
                u(up, down) = kInvSqrt2;
                u(down, down) = -kInvSqrt2;
            }
            break;
        }
        case ElementKind::PBS0: {
            // H reflects and stays on its own path side, V transmits across.
            expect_modes(4);
            Eigen::Index v1 = idx[1], v2 = idx[3];
            u(v1, v1) = 0.0;
            u(v2, v2) = 0.0;
            u(v2, v1) = 1.0;
            u(v1, v2) = 1.0;
            break;
        }
        case ElementKind::PBS45: {
            // Basis change to |+/->; the path's H slot holds the transmitted
            // |+> arm and the V slot the reflected |-> arm.
            expect_modes(2);
            Eigen::Index h = idx[0], v = idx[1];
            u(h, h) = kInvSqrt2;
            u(h, v) = kInvSqrt2;
            u(v, h) = kInvSqrt2;
            u(v, v) = -kInvSqrt2;
            break;
        }
        case ElementKind::HalfWavePlate45: {
            expect_modes(2);
            Eigen::Index h = idx[0], v = idx[1];
            u(h, h) = 0.0;
            u(v, v) = 0.0;
            u(v, h) = 1.0;
            u(h, v) = 1.0;
            break;
        }
        case ElementKind::Relabel: {
            if (idx.size() % 2 != 0) {
                throw std::invalid_argument("Relabel expects swap pairs");
            }
            for (std::size_t k = 0; k + 1 < idx.size(); k += 2) {
                Eigen::Index a = idx[k], b = idx[k + 1];
                u(a, a) = 0.0;
                u(b, b) = 0.0;
                u(b, a) = 1.0;
                u(a, b) = 1.0;
            }
            break;
        }
        case ElementKind::Phase: {
            const Complex ph = std::polar(1.0, e.parameter);
            for (auto i : idx) u(i, i) = ph;
            break;
        }
    }
    return u;
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
    Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

OpticalCircuit identity_circuit(ModeTablePtr table) {
    const auto m = static_cast<Eigen::Index>(table->size());
    return OpticalCircuit{std::move(table), Eigen::MatrixXcd::Identity(m, m), {}};
}

OpticalCircuit circuit_from_elements(ModeTablePtr table, std::vector<Element> elements) {
    OpticalCircuit c = identity_circuit(table);
    for (auto& e : elements) {
        c.unitary = element_matrix(e, *c.table) * c.unitary;
    }
    c.elements = std::move(elements);
    if (!is_unitary(c.unitary)) {
        throw std::runtime_error("composed circuit matrix is not unitary");
    }
    return c;
}

OpticalCircuit compose(const OpticalCircuit& a, const OpticalCircuit& b) {
    if (a.table != b.table && a.table->modes() != b.table->modes()) {
        throw std::invalid_argument("circuits live on different mode tables");
    }
    OpticalCircuit c{a.table, b.unitary * a.unitary, a.elements};
    c.elements.insert(c.elements.end(), b.elements.begin(), b.elements.end());
    return c;
}

FockState apply_circuit(const OpticalCircuit& c, const FockState& s) {
    if (c.table != s.table() && c.table->modes() != s.table()->modes()) {
        throw std::invalid_argument("circuit and state mode tables differ");
    }
    const auto m = c.table->size();

    // Sparse column view of the unitary: images of each input mode.
    std::vector<std::vector<std::pair<std::size_t, Complex>>> cols(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            Complex v = c.unitary(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (std::abs(v) > kPruneThreshold) cols[j].emplace_back(i, v);
        }
    }

    // Polynomial in output creation operators, keyed by occupation vector.
    // Coefficients add across input terms; sqrt(n!) factors enter once at
    // the start (input) and once at the end (output).
    std::map<OccupationVector, Complex> poly;
    for (const auto& [occ, amp] : s.terms()) {
        double fac = 1.0;
        for (auto n : occ) {
            for (int k = 2; k <= n; ++k) fac *= k;
        }
        std::map<OccupationVector, Complex> cur;
        cur.emplace(OccupationVector(m, 0), amp / std::sqrt(fac));
        for (std::size_t j = 0; j < m; ++j) {
            for (int rep = 0; rep < occ[j]; ++rep) {
                std::map<OccupationVector, Complex> next;
                for (const auto& [o, coeff] : cur) {
                    for (const auto& [i, v] : cols[j]) {
                        OccupationVector o2 = o;
                        ++o2[i];
                        next[o2] += coeff * v;
                    }
                }
                cur = std::move(next);
            }
        }
        for (const auto& [o, coeff] : cur) poly[o] += coeff;
    }

    FockState out(s.table());
    for (const auto& [o, coeff] : poly) {
        double fac = 1.0;
        for (auto n : o) {
            for (int k = 2; k <= n; ++k) fac *= k;
        }
        out.add_term(o, coeff * std::sqrt(fac));
    }
    return out;
}

std::string element_log_json(const OpticalCircuit& c) {
    auto arr = nlohmann::json::array();
    for (const auto& e : c.elements) {
        nlohmann::json j;
        j["kind"] = element_kind_name(e.kind);
        std::vector<std::string> labels;
        for (const auto& mo : e.modes) labels.push_back(mo.label());
        j["modes"] = labels;
        if (e.kind == ElementKind::Phase) j["parameter"] = e.parameter;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

}  // namespace hyperconc
