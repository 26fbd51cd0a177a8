#include "hyperconc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hyperconc {

std::string Path::label() const {
    std::string s;
    if (party < 26) {
        s += static_cast<char>('a' + party);
    } else {
        s += "p" + std::to_string(party);
    }
    s += std::to_string(copy);
    s += (spatial == Spatial::Up) ? 'u' : 'd';
    if (aux > 0) s += "#" + std::to_string(aux);
    return s;
}

std::string ModeId::label() const {
    Path p{party, copy, spatial, aux};
    return p.label() + "." + (pol == Pol::H ? "H" : "V");
}

ModeTable::ModeTable(std::vector<ModeId> modes) : modes_(std::move(modes)) {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        auto [it, inserted] = index_.emplace(modes_[i], i);
        if (!inserted) {
            throw std::invalid_argument("duplicate mode label: " + modes_[i].label());
        }
        parent_.push_back(i);
    }
}

std::shared_ptr<const ModeTable> ModeTable::protocol(int n_parties, std::vector<int> copies) {
    if (n_parties < 1) throw std::invalid_argument("need at least one party");
    std::vector<ModeId> modes;
    for (int p = 0; p < n_parties; ++p) {
        for (int c : copies) {
            for (Spatial sp : {Spatial::Up, Spatial::Down}) {
                for (Pol pol : {Pol::H, Pol::V}) {
                    modes.push_back(ModeId{p, c, sp, pol, 0});
                }
            }
        }
    }
    return std::make_shared<ModeTable>(std::move(modes));
}

bool ModeTable::contains(const ModeId& m) const { return index_.count(m) != 0; }

std::size_t ModeTable::index_of(const ModeId& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) {
        throw std::out_of_range("mode not in table: " + m.label());
    }
    return it->second;
}

std::shared_ptr<const ModeTable> ModeTable::without(
        const std::vector<std::size_t>& removed) const {
    std::vector<bool> drop(modes_.size(), false);
    for (std::size_t i : removed) {
        if (i >= modes_.size()) throw std::out_of_range("removal index out of range");
        drop[i] = true;
    }
    std::vector<ModeId> kept;
    std::vector<std::size_t> parent;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (!drop[i]) {
            kept.push_back(modes_[i]);
            parent.push_back(i);
        }
    }
    auto out = std::make_shared<ModeTable>(std::move(kept));
    const_cast<std::vector<std::size_t>&>(out->parent_) = std::move(parent);
    return out;
}

std::vector<std::string> ModeTable::labels() const {
    std::vector<std::string> out;
    out.reserve(modes_.size());
    for (const auto& m : modes_) out.push_back(m.label());
    return out;
}

int total_photons(const OccupationVector& occ) {
    int n = 0;
    for (auto c : occ) n += c;
    return n;
}

StateParams StateParams::from_squares(double alpha2, double delta2) {
    if (alpha2 < 0.0 || alpha2 > 1.0 || delta2 < 0.0 || delta2 > 1.0) {
        throw std::invalid_argument("squared magnitudes must lie in [0, 1]");
    }
    return StateParams{std::sqrt(alpha2), std::sqrt(1.0 - alpha2),
                       std::sqrt(delta2), std::sqrt(1.0 - delta2)};
}

void StateParams::validate() const {
    const double np = std::norm(alpha) + std::norm(beta);
    const double ns = std::norm(delta) + std::norm(eta);
    if (std::abs(np - 1.0) > 1e-12 || std::abs(ns - 1.0) > 1e-12) {
        throw std::invalid_argument("state parameters are not normalized");
    }
}

FockState FockState::basis(ModeTablePtr table, OccupationVector occ) {
    if (occ.size() != table->size()) {
        throw std::invalid_argument("occupation vector length does not match table");
    }
    FockState s(std::move(table));
    s.add_term(occ, 1.0);
    return s;
}

int FockState::photon_count() const {
    if (terms_.empty()) return -1;
    return total_photons(terms_.begin()->first);
}

double FockState::norm2() const {
    double n = 0.0;
    for (const auto& [occ, amp] : terms_) n += std::norm(amp);
    return n;
}

FockState FockState::normalized() const {
    const double n = norm2();
    if (n <= 0.0) throw std::runtime_error("cannot normalize an empty state");
    return scaled(1.0 / std::sqrt(n));
}

bool FockState::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

void FockState::add_term(const OccupationVector& occ, Complex amp) {
    if (occ.size() != table_->size()) {
        throw std::invalid_argument("occupation vector length does not match table");
    }
    if (!terms_.empty() && total_photons(occ) != photon_count()) {
        throw std::invalid_argument("mixed total photon numbers in one state");
    }
    auto it = terms_.find(occ);
    Complex next = amp + (it != terms_.end() ? it->second : Complex{});
    if (std::abs(next) < kPruneThreshold) {
        if (it != terms_.end()) terms_.erase(it);
        return;
    }
    if (it != terms_.end()) {
        it->second = next;
    } else {
        terms_.emplace(occ, next);
    }
}

FockState FockState::scaled(Complex c) const {
    FockState out(table_);
    for (const auto& [occ, amp] : terms_) out.add_term(occ, amp * c);
    return out;
}

static void require_same_table(const FockState& a, const FockState& b) {
    if (a.table() != b.table() && a.table()->modes() != b.table()->modes()) {
        throw std::invalid_argument("states live on different mode tables");
    }
}

FockState superpose(const FockState& a, Complex ca, const FockState& b, Complex cb) {
    require_same_table(a, b);
    if (!a.empty() && !b.empty() && a.photon_count() != b.photon_count()) {
        throw std::invalid_argument("photon-number mismatch in superposition");
    }
    FockState out(a.table());
    for (const auto& [occ, amp] : a.terms()) out.add_term(occ, ca * amp);
    for (const auto& [occ, amp] : b.terms()) out.add_term(occ, cb * amp);
    return out;
}

Complex inner_product(const FockState& a, const FockState& b) {
    require_same_table(a, b);
    Complex acc{};
    const auto& small = a.terms().size() <= b.terms().size() ? a : b;
    const auto& large = a.terms().size() <= b.terms().size() ? b : a;
    for (const auto& [occ, amp] : small.terms()) {
        auto it = large.terms().find(occ);
        if (it == large.terms().end()) continue;
        // conj always goes on the a side
        acc += (&small == &a) ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return acc;
}

double fidelity(const FockState& a, const FockState& b) {
    if (!a.is_normalized(1e-9) || !b.is_normalized(1e-9)) {
        throw std::invalid_argument("fidelity requires normalized states");
    }
    return std::norm(inner_product(a, b));
}

ProjectionResult project_counts(const FockState& s, const std::vector<ModeId>& modes,
                                const std::vector<int>& pattern) {
    if (modes.size() != pattern.size()) {
        throw std::invalid_argument("pattern length does not match mode list");
    }
    std::vector<std::size_t> idx;
    idx.reserve(modes.size());
    for (const auto& m : modes) idx.push_back(s.table()->index_of(m));

    auto reduced = s.table()->without(idx);
    std::vector<bool> measured(s.table()->size(), false);
    for (auto i : idx) measured[i] = true;

    FockState remainder(reduced);
    double prob = 0.0;
    for (const auto& [occ, amp] : s.terms()) {
        bool match = true;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (occ[idx[k]] != pattern[k]) { match = false; break; }
        }
        if (!match) continue;
        prob += std::norm(amp);
        OccupationVector rest;
        rest.reserve(reduced->size());
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (!measured[i]) rest.push_back(occ[i]);
        }
        remainder.add_term(rest, amp);
    }
    if (prob > 0.0) remainder = remainder.normalized();
    return ProjectionResult{prob, std::move(remainder)};
}

FockState tensor_product(const FockState& a, const FockState& b, ModeTablePtr joint) {
    std::vector<std::size_t> map_a, map_b;
    for (const auto& m : a.table()->modes()) map_a.push_back(joint->index_of(m));
    for (const auto& m : b.table()->modes()) map_b.push_back(joint->index_of(m));

    FockState out(joint);
    for (const auto& [oa, aa] : a.terms()) {
        for (const auto& [ob, ab] : b.terms()) {
            OccupationVector occ(joint->size(), 0);
            for (std::size_t i = 0; i < oa.size(); ++i) occ[map_a[i]] += oa[i];
            for (std::size_t i = 0; i < ob.size(); ++i) {
                if (ob[i] > 0 && occ[map_b[i]] > 0) {
                    throw std::invalid_argument("tensor factors overlap on mode " +
                                                b.table()->mode(i).label());
                }
                occ[map_b[i]] += ob[i];
            }
            out.add_term(occ, aa * ab);
        }
    }
    return out;
}

FockState remap_modes(const FockState& s, const std::map<ModeId, ModeId>& mode_map,
                      ModeTablePtr target) {
    std::vector<long> dest(s.table()->size(), -1);
    for (std::size_t i = 0; i < s.table()->size(); ++i) {
        auto it = mode_map.find(s.table()->mode(i));
        if (it != mode_map.end()) dest[i] = static_cast<long>(target->index_of(it->second));
    }
    FockState out(target);
    for (const auto& [occ, amp] : s.terms()) {
        OccupationVector mapped(target->size(), 0);
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (occ[i] == 0) continue;
            if (dest[i] < 0) {
                throw std::invalid_argument("occupied mode has no remap target: " +
                                            s.table()->mode(i).label());
            }
            mapped[static_cast<std::size_t>(dest[i])] += occ[i];
        }
        out.add_term(mapped, amp);
    }
    return out;
}

std::string to_json(const FockState& s) {
    nlohmann::json j;
    j["modes"] = s.table()->labels();
    auto terms = nlohmann::json::array();
    for (const auto& [occ, amp] : s.terms()) {  // std::map: already lexicographic
        nlohmann::json t;
        t["occ"] = std::vector<int>(occ.begin(), occ.end());
        t["re"] = amp.real();
        t["im"] = amp.imag();
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j.dump();
}

}  // namespace hyperconc
