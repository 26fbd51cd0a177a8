// hyperconc command-line tool: run the protocol, sweep parameters,
// print device truth tables, cross-check optics against the oracle.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hyperconc/protocol.hpp"
#include "hyperconc/truth_tables.hpp"
#include "hyperconc/verify.hpp"

namespace {

using namespace hyperconc;

bool log_enabled() {
    const char* lvl = std::getenv("HYPERCONC_LOG");
    return lvl != nullptr && std::string(lvl) != "off" && std::string(lvl) != "quiet";
}

void log_info(const std::string& msg) {
    if (log_enabled()) std::cerr << "[hyperconc] " << msg << "\n";
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit(const std::string& text, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(out_file);
        if (!f) throw std::runtime_error("cannot open output file: " + out_file);
        f << text;
        if (!text.empty() && text.back() != '\n') f << "\n";
    }
}

struct CommonFlags {
    int n = 3;
    double alpha2 = 0.5;
    double delta2 = 0.5;
    std::string variant = "two-copies";
    std::string ppc = "plain";
    std::string detector = "pnr";
    std::string format;
    std::string out_file;
};

ProtocolConfig to_config(const CommonFlags& f) {
    ProtocolConfig cfg;
    cfg.n_parties = f.n;
    cfg.params = StateParams::from_squares(f.alpha2, f.delta2);
    cfg.detector_model = (f.detector == "bucket") ? DetectorModel::Bucket : DetectorModel::PNR;
    cfg.ppc_variant = (f.ppc == "improved") ? PpcVariant::Improved : PpcVariant::Plain;
    cfg.variant =
        (f.variant == "auxiliary") ? ProtocolVariant::Auxiliary : ProtocolVariant::TwoCopies;
    return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_params) {
    cmd->add_option("--n", f.n, "number of parties (>= 2)")->check(CLI::Range(2, 8));
    if (with_params) {
        cmd->add_option("--alpha2", f.alpha2, "|alpha|^2 of the polarization pair")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--delta2", f.delta2, "|delta|^2 of the spatial pair")
            ->check(CLI::Range(0.0, 1.0));
    }
    cmd->add_option("--variant", f.variant, "protocol variant")
        ->check(CLI::IsMember({"two-copies", "auxiliary"}));
    cmd->add_option("--ppc", f.ppc, "polarization parity check variant")
        ->check(CLI::IsMember({"plain", "improved"}));
    cmd->add_option("--detector", f.detector, "detector model")
        ->check(CLI::IsMember({"pnr", "bucket"}));
    cmd->add_option("--out", f.out_file, "write output to this file instead of stdout");
}

std::string sweep_csv(int n, double lo, double hi, double step, const CommonFlags& flags) {
    if (step <= 0.0 || lo <= 0.0 || hi >= 1.0 || lo > hi) {
        throw CLI::ValidationError("sweep grid must lie strictly inside (0,1) with step > 0");
    }
    std::string csv = "alpha2,delta2,p_exact,p_formula\n";
    const int steps = static_cast<int>(std::round((hi - lo) / step));
    for (int i = 0; i <= steps; ++i) {
        const double a2 = lo + i * step;
        for (int k = 0; k <= steps; ++k) {
            const double d2 = lo + k * step;
            CommonFlags f = flags;
            f.n = n;
            f.alpha2 = a2;
            f.delta2 = d2;
            const RunReport rep = run_exact(to_config(f));
            csv += fmt12(a2) + "," + fmt12(d2) + "," + fmt12(rep.success_probability) + "," +
                   fmt12(rep.formula_probability) + "\n";
        }
    }
    return csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-optics hyperentanglement concentration simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    long shots = 0;
    std::uint64_t seed = 1;
    auto* run = app.add_subcommand("run", "run the protocol once (exact or sampled)");
    add_common(run, run_flags, true);
    run->add_option("--shots", shots, "Monte-Carlo shots (0 = exact enumeration only)");
    run->add_option("--seed", seed, "RNG seed for shot sampling");
    run->add_option("--format", run_flags.format, "output format")
        ->check(CLI::IsMember({"json"}));

    CommonFlags sweep_flags;
    double lo = 0.05, hi = 0.95, step = 0.05;
    auto* sweep = app.add_subcommand("sweep", "grid sweep over (|alpha|^2, |delta|^2)");
    add_common(sweep, sweep_flags, false);
    sweep->add_option("--lo", lo, "grid lower bound");
    sweep->add_option("--hi", hi, "grid upper bound");
    sweep->add_option("--step", step, "grid step");
    sweep->add_option("--format", sweep_flags.format, "output format")
        ->check(CLI::IsMember({"csv"}));

    CommonFlags dev_flags;
    auto* devices = app.add_subcommand("devices", "print device truth tables");
    devices->add_option("--detector", dev_flags.detector, "detector model")
        ->check(CLI::IsMember({"pnr", "bucket"}));
    devices->add_option("--format", dev_flags.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    devices->add_option("--out", dev_flags.out_file, "output file");

    CommonFlags verify_flags;
    int trials = 100;
    std::uint64_t verify_seed = 1;
    auto* verify = app.add_subcommand("verify", "randomized optics-vs-oracle comparison");
    verify->add_option("--trials", trials, "number of random circuits")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", verify_seed, "RNG seed");
    verify->add_option("--format", verify_flags.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    verify->add_option("--out", verify_flags.out_file, "output file");

    try {
        app.parse(argc, argv);

        if (run->parsed()) {
            log_info("running protocol, n=" + std::to_string(run_flags.n));
            const ProtocolConfig cfg = to_config(run_flags);
            if (shots > 0) {
                emit(shot_report_json(run_shots(cfg, shots, seed)), run_flags.out_file);
            } else {
                emit(report_json(run_exact(cfg)), run_flags.out_file);
            }
        } else if (sweep->parsed()) {
            log_info("sweeping grid");
            emit(sweep_csv(sweep_flags.n, lo, hi, step, sweep_flags), sweep_flags.out_file);
        } else if (devices->parsed()) {
            const DetectorModel model =
                dev_flags.detector == "bucket" ? DetectorModel::Bucket : DetectorModel::PNR;
            if (dev_flags.format == "json") {
                emit(device_tables_json(model), dev_flags.out_file);
            } else {
                emit(device_tables_text(model), dev_flags.out_file);
            }
        } else if (verify->parsed()) {
            const VerifyResult res = verify_against_oracle(trials, verify_seed);
            if (verify_flags.format == "text") {
                emit("trials: " + std::to_string(res.trials) +
                         "\nmax amplitude deviation: " + fmt12(res.max_amplitude_deviation) +
                         "\nmax completeness defect: " + fmt12(res.max_completeness_defect),
                     verify_flags.out_file);
            } else {
                emit(verify_json(res), verify_flags.out_file);
            }
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
