#pragma once

#include "mslab/dynamics.hpp"

#include <string>

namespace mslab {

// Line-oriented experiment configuration: '#' comments, [section] headers,
// key = value pairs. Unknown keys and out-of-range values raise ConfigError
// naming the offending key.
struct ExperimentConfig {
    // top level
    std::string kind = "ms";            // ms | quasilinear1d
    std::string mode = "semi_implicit"; // semi_implicit | picard
    unsigned seed = 1234;

    // [geometry] (interface runs)
    double container_radius = 1.0;
    std::string base = "circle"; // circle | ellipse
    Vec2 center{0.0, 0.0};
    double radius = 0.5;
    double semi_a = 0.5, semi_b = 0.4;
    int nodes = 128;

    // [initial]
    std::string initial = "mode"; // none | constant | mode | fourier_decay
    int mode_k = 2;
    double amplitude = 0.02;
    double decay_exponent = 2.2;

    // [problem] (1d runs)
    std::string equation = "heat"; // heat | quasilinear | reaction
    int mesh = 48;
    double initial_amplitude = 1.0;

    // [grid]
    double p = 6.0;
    double mu = 0.75;
    double horizon = 0.2;
    int steps = 1000;
    double grading = 0.0; // 0 = auto
    double window = 0.02;
    int window_steps = 16;

    // [monitors]
    MonitorThresholds monitors;

    // [output]
    std::string out_dir = "out";
    int snapshots = 8;

    // [linearize]
    int modes = 16;
    double fd_step = 1e-5;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// cross-field checks: mu above the critical weight for the chosen kind,
// positive thresholds, admissible initial data
void validate_config(const ExperimentConfig& config);

// assemble the initial interface state / 1d state from the config
MsState initial_ms_state(const ExperimentConfig& config);
std::vector<double> initial_1d_state(const ExperimentConfig& config);
std::shared_ptr<QuasilinearProblem> problem_1d(const ExperimentConfig& config);

EvolveConfig evolve_config(const ExperimentConfig& config);

} // namespace mslab
