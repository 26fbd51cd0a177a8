#include "hyperconc/devices.hpp"

#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hyperconc {

std::string DetectorInfo::tag() const {
    std::string s = "(";
    s += (spatial_sign > 0) ? "+'" : "-'";
    s += ",";
    s += (pol_sign > 0) ? "+" : "-";
    s += ")";
    return s;
}

std::vector<ModeId> DetectorLayout::detector_modes() const {
    std::vector<ModeId> out;
    out.reserve(detectors.size());
    for (const auto& d : detectors) out.push_back(d.mode);
    return out;
}

namespace {

void require_distinct(std::initializer_list<Path> paths) {
    std::vector<Path> v(paths);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            if (v[i] == v[j]) {
                throw std::invalid_argument("device paths collide: " + v[i].label());
            }
        }
    }
}

// Both diagonal-analyzer detectors of one path, with its spatial tag.
void add_analyzer_detectors(DetectorLayout& layout, Path p, int spatial_sign) {
    layout.detectors.push_back(DetectorInfo{p.mode(Pol::H), spatial_sign, +1});
    layout.detectors.push_back(DetectorInfo{p.mode(Pol::V), spatial_sign, -1});
}

}  // namespace

Device build_ppc(ModeTablePtr table, std::array<Path, 2> p1, std::array<Path, 2> p2) {
    require_distinct({p1[0], p1[1], p2[0], p2[1]});
    std::vector<Element> elems{
        Element::pbs0(p1[0], p2[0]),  // u layer
        Element::pbs0(p1[1], p2[1]),  // d layer
        Element::beam_splitter(p2[0], p2[1]),
        Element::pbs45(p2[0]),
        Element::pbs45(p2[1]),
    };
    DetectorLayout layout;
    add_analyzer_detectors(layout, p2[0], +1);  // BS up output -> +'
    add_analyzer_detectors(layout, p2[1], -1);
    layout.kept = {p1[0].mode(Pol::H), p1[0].mode(Pol::V), p1[1].mode(Pol::H),
                   p1[1].mode(Pol::V)};
    return Device{"PPC", circuit_from_elements(std::move(table), std::move(elems)), layout};
}

Device build_improved_ppc(ModeTablePtr table, std::array<Path, 2> p1, std::array<Path, 2> p2,
                          std::array<Path, 2> anc) {
    require_distinct({p1[0], p1[1], p2[0], p2[1], anc[0], anc[1]});
    std::vector<Element> elems{
        Element::pbs0(p1[0], p2[0]),
        Element::pbs0(p1[1], p2[1]),
        Element::beam_splitter(p2[0], p2[1]),
        // Added PBS0s: V photons leave for the ancilla arms, so an H/V
        // pair can no longer meet in one analyzer.
        Element::pbs0(p2[0], anc[0]),
        Element::pbs0(p2[1], anc[1]),
        Element::pbs45(p2[0]),
        Element::pbs45(anc[0]),
        Element::pbs45(p2[1]),
        Element::pbs45(anc[1]),
    };
    DetectorLayout layout;
    add_analyzer_detectors(layout, p2[0], +1);
    add_analyzer_detectors(layout, anc[0], +1);
    add_analyzer_detectors(layout, p2[1], -1);
    add_analyzer_detectors(layout, anc[1], -1);
    layout.kept = {p1[0].mode(Pol::H), p1[0].mode(Pol::V), p1[1].mode(Pol::H),
                   p1[1].mode(Pol::V)};
    return Device{"PPC+", circuit_from_elements(std::move(table), std::move(elems)), layout};
}

Device build_spc(ModeTablePtr table, std::array<Path, 2> p1, std::array<Path, 2> p2) {
    require_distinct({p1[0], p1[1], p2[0], p2[1]});
    std::vector<Element> elems{
        Element::beam_splitter(p2[0], p1[1]),  // y2u up port, y1d down port
        Element::pbs45(p2[0]),
        Element::pbs45(p1[1]),
    };
    DetectorLayout layout;
    add_analyzer_detectors(layout, p2[0], +1);
    add_analyzer_detectors(layout, p1[1], -1);
    layout.kept = {p1[0].mode(Pol::H), p1[0].mode(Pol::V), p2[1].mode(Pol::H),
                   p2[1].mode(Pol::V)};
    return Device{"SPC", circuit_from_elements(std::move(table), std::move(elems)), layout};
}

Device build_spm(ModeTablePtr table, std::array<Path, 2> paths) {
    require_distinct({paths[0], paths[1]});
    std::vector<Element> elems{
        Element::beam_splitter(paths[0], paths[1]),
        Element::pbs45(paths[0]),
        Element::pbs45(paths[1]),
    };
    DetectorLayout layout;
    add_analyzer_detectors(layout, paths[0], +1);
    add_analyzer_detectors(layout, paths[1], -1);
    return Device{"SPM", circuit_from_elements(std::move(table), std::move(elems)), layout};
}

std::vector<std::pair<DetectorInfo, double>> spm_outcomes(const Device& d, const FockState& s) {
    if (s.photon_count() != 1) {
        throw std::invalid_argument("single-photon measurement needs exactly one photon");
    }
    const FockState out = apply_circuit(d.circuit, s);
    std::vector<std::pair<DetectorInfo, double>> probs;
    for (const auto& det : d.layout.detectors) {
        const std::size_t idx = d.circuit.table->index_of(det.mode);
        double p = 0.0;
        for (const auto& [occ, amp] : out.terms()) {
            if (occ[idx] == 1) p += std::norm(amp);
        }
        probs.emplace_back(det, p);
    }
    return probs;
}

DetectionEvent classify_event(const DetectorLayout& layout, DetectorModel model,
                              const std::vector<int>& counts) {
    if (counts.size() != layout.detectors.size()) {
        throw std::invalid_argument("count vector does not match detector layout");
    }
    DetectionEvent ev;
    ev.counts = counts;
    const int total = std::accumulate(counts.begin(), counts.end(), 0);

    if (model == DetectorModel::PNR) {
        if (total == 1) {
            ev.classification = Classification::Accept;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (counts[i] == 1) ev.outcome = layout.detectors[i];
            }
        }
        return ev;
    }

    // Bucket: only click booleans are observable.
    int clicks = 0;
    std::size_t clicked = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] >= 1) {
            ++clicks;
            clicked = i;
        }
    }
    if (clicks == 1) {
        ev.classification = Classification::Accept;
        ev.outcome = layout.detectors[clicked];
        ev.ambiguous = counts[clicked] > 1;  // false accept a PNR detector would catch
    }
    return ev;
}

std::string device_json(const Device& d) {
    nlohmann::json j;
    j["name"] = d.name;
    j["elements"] = nlohmann::json::parse(element_log_json(d.circuit));
    auto dets = nlohmann::json::array();
    for (const auto& det : d.layout.detectors) {
        dets.push_back({{"mode", det.mode.label()},
                        {"spatial_sign", det.spatial_sign},
                        {"pol_sign", det.pol_sign}});
    }
    j["detectors"] = std::move(dets);
    std::vector<std::string> kept;
    for (const auto& m : d.layout.kept) kept.push_back(m.label());
    j["kept"] = kept;
    return j.dump();
}

}  // namespace hyperconc
