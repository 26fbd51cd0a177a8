// devices.hpp
// The four measurement devices of the protocol: polarization parity check
// (plain and improved), spatial-mode parity check, and the single-photon
// two-qubit measurement. Each is a circuit plus detector layout plus an
// outcome classifier.

#pragma once

#include <optional>

#include "hyperconc/optics.hpp"

namespace hyperconc {

// Semantic tag of one detector: which diagonal-basis outcome a click there
// announces. Signs are +1 / -1 for +'/-' (spatial) and +/- (polarization).
struct DetectorInfo {
    ModeId mode;
    int spatial_sign = +1;
    int pol_sign = +1;

    std::string tag() const;  // e.g. "(+',-)"
};

struct DetectorLayout {
    std::vector<DetectorInfo> detectors;
    std::vector<ModeId> kept;  // port-1 modes that exit the device unmeasured

    std::vector<ModeId> detector_modes() const;
};

enum class DetectorModel { PNR, Bucket };
enum class Classification { Accept, Reject };

struct DetectionEvent {
    std::vector<int> counts;  // per detector, in layout order
    Classification classification = Classification::Reject;
    bool ambiguous = false;   // Bucket-model accept that a PNR detector would reject
    // Diagonal-basis outcome of the single detected photon (Accept only).
    std::optional<DetectorInfo> outcome;
};

struct Device {
    std::string name;
    OpticalCircuit circuit;
    DetectorLayout layout;
};

// Plain PPC (one PBS0 per spatial layer, BS across the detector-side pair,
// diagonal analyzers). photon1 keeps port 1; photon2's paths carry the
// detectors. BS up port = photon2's u path, tagged +'.
Device build_ppc(ModeTablePtr table, std::array<Path, 2> photon1_paths,
                 std::array<Path, 2> photon2_paths);

// PPC with two extra PBS0s on the detector side routing V photons onto the
// ancilla paths, so polarization-distinct pairs never share a detector.
// The diagonal BS sits before the added PBS0s.
Device build_improved_ppc(ModeTablePtr table, std::array<Path, 2> photon1_paths,
                          std::array<Path, 2> photon2_paths,
                          std::array<Path, 2> ancilla_paths);

// SPC: photon1's d path and photon2's u path interfere at the BS (d port
// = photon1's path), then diagonal analyzers. Kept: photon1's u path and
// photon2's d path (to be relabeled as the survivor's d path).
Device build_spc(ModeTablePtr table, std::array<Path, 2> photon1_paths,
                 std::array<Path, 2> photon2_paths);

// Single-photon two-qubit measurement: BS across the photon's two paths,
// analyzers on both outputs, four detectors, no kept modes.
Device build_spm(ModeTablePtr table, std::array<Path, 2> paths);

// Outcome distribution of a single-photon measurement device; throws if
// the input carries anything but one photon.
std::vector<std::pair<DetectorInfo, double>> spm_outcomes(const Device& d, const FockState& s);

// Accept iff exactly one photon sits on the detectors (PNR), or exactly
// one detector clicks (Bucket). A bucket click hiding a multi-photon
// bunch is classified Accept but flagged ambiguous.
DetectionEvent classify_event(const DetectorLayout& layout, DetectorModel model,
                              const std::vector<int>& counts);

std::string device_json(const Device& d);

}  // namespace hyperconc
