#include "mslab/cli.hpp"

#include "mslab/config.hpp"
#include "mslab/io.hpp"
#include "mslab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace mslab {

namespace {

void usage() {
    std::cout << "usage: mslab run <config>\n"
                 "       mslab verify <geometry|elliptic|stepper|dynamics|all> [seed]\n"
                 "       mslab linearize <config>\n";
}

std::string stop_name(StopReason s) {
    switch (s) {
        case StopReason::HorizonReached: return "horizon-reached";
        case StopReason::TubeViolationStop: return "tube-violation";
        case StopReason::BallConditionBreach: return "ball-condition-breach";
        case StopReason::NormBlowup: return "norm-blowup";
        case StopReason::EtaMarginBreach: return "eta-margin-breach";
        case StopReason::NoContractionStop: return "no-contraction";
    }
    return "unknown";
}

std::string run_report(const ExperimentConfig& cfg, const Trajectory& tr) {
    std::ostringstream os;
    os << "run report\n";
    os << "kind " << cfg.kind << "\n";
    os << "mode " << cfg.mode << "\n";
    os << "seed " << cfg.seed << "\n";
    os << "status " << stop_name(tr.stop) << "\n";
    if (!tr.stop_detail.empty()) os << "detail " << tr.stop_detail << "\n";
    os << "samples " << tr.times.size() << "\n";
    os << "end_time " << format_double(tr.times.empty() ? 0.0 : tr.times.back()) << "\n";
    if (tr.is_interface && !tr.times.empty()) {
        os << "final_perimeter " << format_double(tr.perimeter.back()) << "\n";
        os << "final_area " << format_double(tr.area.back()) << "\n";
        os << "final_residual " << format_double(tr.residual.back()) << "\n";
        os << "area_drift "
           << format_double(std::fabs(tr.area.back() - tr.area.front())) << "\n";
        os << "reparameterizations " << tr.reparam_events.size() << "\n";
        const OmegaLimitReport omega = omega_limit_report(tr);
        os << "omega_verdict "
           << (omega.verdict == OmegaVerdict::Converged
                   ? "converged"
                   : omega.verdict == OmegaVerdict::InProgress ? "in-progress" : "non-convergent")
           << "\n";
        if (omega.verdict != OmegaVerdict::NonConvergent) {
            os << "limit_center " << format_double(omega.limit.center.x) << " "
               << format_double(omega.limit.center.y) << "\n";
            os << "limit_radius " << format_double(omega.limit.radius) << "\n";
            os << "rate " << format_double(omega.rate.omega) << "\n";
            os << "rate_quality " << format_double(omega.rate.quality) << "\n";
        }
    }
    if (!tr.is_interface && !tr.times.empty()) {
        os << "final_x0_norm " << format_double(tr.x0_norm.back()) << "\n";
        os << "final_xgamma_norm " << format_double(tr.xgamma_norm.back()) << "\n";
    }
    if (!tr.windows.empty()) {
        os << "contraction_windows " << tr.windows.size() << "\n";
        for (size_t w = 0; w < tr.windows.size(); ++w) {
            const ContractionDiagnostics& d = tr.windows[w];
            os << "window " << w << " T " << format_double(d.window) << " kappa "
               << format_double(d.kappa_hat) << " iterations " << d.iterations << " halvings "
               << d.halvings << " L_A " << format_double(d.lipschitz_A) << " L_F "
               << format_double(d.lipschitz_F) << "\n";
        }
    }
    return os.str();
}

} // namespace

std::string resolve_output_dir(const std::string& configured) {
    std::filesystem::path p(configured);
    const char* root = std::getenv("MSLAB_OUTPUT_ROOT");
    if (root != nullptr && *root != '\0' && p.is_relative())
        p = std::filesystem::path(root) / p;
    return p.string();
}

int cmd_run(const std::string& config_path) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    try {
        const std::string out = resolve_output_dir(cfg.out_dir);
        std::filesystem::create_directories(out);
        Trajectory tr;
        if (cfg.kind == "ms") {
            const MsState st = initial_ms_state(cfg);
            tr = evolve_ms(st, evolve_config(cfg));
            // snapshot SVGs, evenly spread over the recorded samples
            const int count = std::min<int>(cfg.snapshots, static_cast<int>(tr.times.size()));
            for (int s = 0; s < count; ++s) {
                const size_t idx =
                    count == 1 ? 0 : s * (tr.times.size() - 1) / (count - 1);
                const MsState snap = snapshot_state(tr.container, tr.snapshots[idx]);
                const ReferenceCurve g = realize_interface(snap.field());
                char name[64];
                std::snprintf(name, sizeof(name), "snapshot_%03d.svg", s);
                write_text_atomic(out + "/" + name, curve_svg(g, tr.container));
            }
        } else {
            const auto pb = problem_1d(cfg);
            tr = evolve_quasilinear(*pb, initial_1d_state(cfg), evolve_config(cfg));
        }
        write_text_atomic(out + "/trajectory.csv", trajectory_csv(tr));
        write_text_atomic(out + "/diagnostics.txt", run_report(cfg, tr));
        std::cout << run_report(cfg, tr);
        return tr.stop == StopReason::HorizonReached ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(const std::string& suite) {
    return cmd_verify_seeded(suite, 1234);
}

int cmd_verify_seeded(const std::string& suite, unsigned seed) {
    try {
        const VerifyReport rep = verify_suite(suite, seed);
        std::cout << rep.text();
        return rep.all_pass() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_linearize(const std::string& config_path) {
    try {
        const ExperimentConfig cfg = load_config(config_path);
        if (cfg.kind != "ms") {
            std::cerr << "error: linearize needs an interface configuration\n";
            return 1;
        }
        const MsState st = initial_ms_state(cfg);
        const LinearizationReport rep = linearize_at(st, cfg.fd_step, cfg.modes);
        const std::string text = linearization_report_text(rep);
        const std::string out = resolve_output_dir(cfg.out_dir);
        std::filesystem::create_directories(out);
        write_text_atomic(out + "/linearization.txt", text);
        std::cout << text;
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cli_main(int argc, const char* const* argv) {
    if (argc < 2) {
        usage();
        return 1;
    }
    const std::string cmd = argv[1];
    if (cmd == "run" && argc == 3) return cmd_run(argv[2]);
    if (cmd == "verify" && (argc == 3 || argc == 4)) {
        unsigned seed = 1234;
        if (argc == 4) seed = static_cast<unsigned>(std::strtoul(argv[3], nullptr, 10));
        return cmd_verify_seeded(argv[2], seed);
    }
    if (cmd == "linearize" && argc == 3) return cmd_linearize(argv[2]);
    usage();
    return 1;
}

} // namespace mslab
