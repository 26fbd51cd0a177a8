// protocol.hpp
// End-to-end hyperconcentration: state preparation, second-copy flips,
// parity checks, single-photon measurements, post-selection, sign
// classification and sigma_z corrections.

#pragma once

#include <cstdint>

#include "hyperconc/devices.hpp"

namespace hyperconc {

enum class PpcVariant { Plain, Improved };
enum class ProtocolVariant { TwoCopies, Auxiliary };

struct ProtocolConfig {
    int n_parties = 2;
    StateParams params;
    DetectorModel detector_model = DetectorModel::PNR;
    PpcVariant ppc_variant = PpcVariant::Plain;
    ProtocolVariant variant = ProtocolVariant::TwoCopies;

    void validate() const;
};

// One device's share of a branch's detection pattern.
struct DeviceRecord {
    std::string device;
    std::vector<int> counts;
    Classification classification = Classification::Reject;
    bool ambiguous = false;
    std::optional<DetectorInfo> outcome;
};

struct BranchOutcome {
    int branch_id = 0;
    std::vector<int> pattern;  // counts over all detector modes, device order
    std::vector<DeviceRecord> detections;
    bool accepted = false;
    bool ambiguous = false;
    double probability = 0.0;

    // Sign bits. p/q compare the two parity-check outcomes; P/Q are read
    // off the collapsed state's term signs and cross-checked against the
    // parity-of-outcomes rule.
    int p = 0, q = 0;
    int P = 0, Q = 0;
    int P_rule = 0, Q_rule = 0;
    bool rule_consistent = false;
    bool sigma_z_polarization = false;
    bool sigma_z_spatial = false;

    FockState collapsed;  // after corrections, over the copy-1 table
    double fidelity_after_correction = 0.0;
};

struct RunReport {
    ProtocolConfig config;
    double success_probability = 0.0;  // sum of clean accepts
    double formula_probability = 0.0;  // 4|alpha beta delta eta|^2
    double false_accept_probability = 0.0;  // bucket-model ambiguous accepts
    double total_probability = 0.0;    // all branches, accept + reject
    std::vector<BranchOutcome> branches;
    ModeTablePtr final_table;          // copy-1 table the collapsed states live on
    FockState target;                  // maximally hyperentangled GHZ target
};

struct ShotReport {
    RunReport exact;
    long shots = 0;
    std::uint64_t seed = 0;
    long accept_count = 0;
    double empirical_rate = 0.0;
    std::map<int, long> branch_frequency;
};

double success_formula(const StateParams& p);

// The partially hyperentangled N-photon GHZ input over the given copy's
// modes: (alpha|H..H> + beta|V..V>) x (delta|u..u> + eta|d..d>).
FockState build_input(int n_parties, const StateParams& params, int copy = 1);

// Polarization flip (HWP45 on every copy-2 path) plus u/d renaming on all
// copy-2 modes of the state's table.
FockState flip_second_copy(const FockState& s);

// The maximally hyperentangled GHZ state over the copy-1 table.
FockState target_state(int n_parties);

RunReport run_exact(const ProtocolConfig& config);
ShotReport run_shots(const ProtocolConfig& config, long shots, std::uint64_t seed);

std::string report_json(const RunReport& r);
std::string shot_report_json(const ShotReport& r);

}  // namespace hyperconc
