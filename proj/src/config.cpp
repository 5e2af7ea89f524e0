#include "mslab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <random>
#include <sstream>

namespace mslab {

namespace {

const double kPi = std::acos(-1.0);

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct RawConfig {
    std::map<std::string, std::string> kv; // "section.key" or "key"
};

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key at line " + std::to_string(lineno));
        const std::string full = section.empty() ? key : section + "." + key;
        raw.kv[full] = value;
    }
    return raw;
}

class Reader {
  public:
    explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

    bool has(const std::string& key) const { return raw_.kv.count(key) > 0; }

    std::string str(const std::string& key, const std::string& defv) {
        used_.insert(key);
        auto it = raw_.kv.find(key);
        return it == raw_.kv.end() ? defv : it->second;
    }

    double num(const std::string& key, double defv) {
        used_.insert(key);
        auto it = raw_.kv.find(key);
        if (it == raw_.kv.end()) return defv;
        try {
            size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' has a non-numeric value");
        }
    }

    int integer(const std::string& key, int defv) {
        const double v = num(key, defv);
        if (v != std::floor(v)) throw ConfigError("key '" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    Vec2 pair(const std::string& key, Vec2 defv) {
        used_.insert(key);
        auto it = raw_.kv.find(key);
        if (it == raw_.kv.end()) return defv;
        std::istringstream ls(it->second);
        Vec2 v;
        if (!(ls >> v.x >> v.y)) throw ConfigError("key '" + key + "' needs two numbers");
        return v;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : raw_.kv)
            if (!used_.count(key)) throw ConfigError("unknown key '" + key + "'");
    }

  private:
    RawConfig raw_;
    std::set<std::string> used_;
};

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    Reader r(parse_raw(text));
    ExperimentConfig c;
    c.kind = r.str("kind", c.kind);
    c.mode = r.str("mode", c.mode);
    c.seed = static_cast<unsigned>(r.integer("seed", static_cast<int>(c.seed)));

    c.container_radius = r.num("geometry.container_radius", c.container_radius);
    c.base = r.str("geometry.base", c.base);
    c.center = r.pair("geometry.center", c.center);
    c.radius = r.num("geometry.radius", c.radius);
    c.semi_a = r.num("geometry.semi_a", c.semi_a);
    c.semi_b = r.num("geometry.semi_b", c.semi_b);
    c.nodes = r.integer("geometry.nodes", c.nodes);

    c.initial = r.str("initial.type", c.initial);
    c.mode_k = r.integer("initial.mode_k", c.mode_k);
    c.amplitude = r.num("initial.amplitude", c.amplitude);
    c.decay_exponent = r.num("initial.decay_exponent", c.decay_exponent);

    c.equation = r.str("problem.equation", c.equation);
    c.mesh = r.integer("problem.mesh", c.mesh);
    c.initial_amplitude = r.num("problem.initial_amplitude", c.initial_amplitude);

    c.p = r.num("grid.p", c.p);
    c.mu = r.num("grid.mu", c.mu);
    c.horizon = r.num("grid.horizon", c.horizon);
    c.steps = r.integer("grid.steps", c.steps);
    c.grading = r.num("grid.grading", c.grading);
    c.window = r.num("grid.window", c.window);
    c.window_steps = r.integer("grid.window_steps", c.window_steps);

    c.monitors.norm_max = r.num("monitors.norm_max", c.monitors.norm_max);
    c.monitors.ball_min = r.num("monitors.ball_min", c.monitors.ball_min);
    c.monitors.eta_factor = r.num("monitors.eta_factor", c.monitors.eta_factor);

    c.out_dir = r.str("output.dir", c.out_dir);
    c.snapshots = r.integer("output.snapshots", c.snapshots);

    c.modes = r.integer("linearize.modes", c.modes);
    c.fd_step = r.num("linearize.fd_step", c.fd_step);

    r.reject_unknown();
    validate_config(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

void validate_config(const ExperimentConfig& c) {
    if (c.kind != "ms" && c.kind != "quasilinear1d")
        throw ConfigError("key 'kind' must be ms or quasilinear1d");
    if (c.mode != "semi_implicit" && c.mode != "picard")
        throw ConfigError("key 'mode' must be semi_implicit or picard");
    if (!(c.p > 1.0)) throw ConfigError("key 'grid.p' must exceed 1");
    double mu0 = 0.0;
    try {
        mu0 = c.kind == "ms" ? compute_mu0(2, c.p, Mu0Kind::MullinsSekerka)
                             : compute_mu0(1, c.p, Mu0Kind::SecondOrder);
    } catch (const ParameterOutOfRange&) {
        throw ConfigError("key 'grid.p' is below the admissible range for kind " + c.kind);
    }
    if (!(c.mu > mu0 && c.mu <= 1.0))
        throw ConfigError("key 'grid.mu' must lie in (" + std::to_string(mu0) + ", 1]");
    if (!(c.horizon > 0.0)) throw ConfigError("key 'grid.horizon' must be positive");
    if (c.steps < 1) throw ConfigError("key 'grid.steps' must be positive");
    if (c.window_steps < 2) throw ConfigError("key 'grid.window_steps' must be at least 2");
    if (!(c.window > 0.0)) throw ConfigError("key 'grid.window' must be positive");
    if (!(c.monitors.norm_max > 0.0)) throw ConfigError("key 'monitors.norm_max' must be positive");
    if (!(c.monitors.ball_min > 0.0)) throw ConfigError("key 'monitors.ball_min' must be positive");
    if (!(c.monitors.eta_factor > 0.0))
        throw ConfigError("key 'monitors.eta_factor' must be positive");
    if (!(c.container_radius > 0.0))
        throw ConfigError("key 'geometry.container_radius' must be positive");
    if (c.kind == "ms") {
        if (!is_pow2(c.nodes) || c.nodes < 16)
            throw ConfigError("key 'geometry.nodes' must be a power of two >= 16");
        if (c.base != "circle" && c.base != "ellipse")
            throw ConfigError("key 'geometry.base' must be circle or ellipse");
        if (c.initial != "none" && c.initial != "constant" && c.initial != "mode" &&
            c.initial != "fourier_decay")
            throw ConfigError("key 'initial.type' must be none, constant, mode or fourier_decay");
    } else {
        if (c.mesh < 3) throw ConfigError("key 'problem.mesh' must be at least 3");
        if (c.equation != "heat" && c.equation != "quasilinear" && c.equation != "reaction")
            throw ConfigError("key 'problem.equation' must be heat, quasilinear or reaction");
    }
    if (c.snapshots < 0) throw ConfigError("key 'output.snapshots' must be nonnegative");
    if (c.modes < 2) throw ConfigError("key 'linearize.modes' must be at least 2");
    if (!(c.fd_step > 0.0)) throw ConfigError("key 'linearize.fd_step' must be positive");
}

MsState initial_ms_state(const ExperimentConfig& c) {
    if (c.kind != "ms") throw ConfigError("key 'kind' is not ms");
    const Container cont{c.container_radius, {0.0, 0.0}};
    if (c.base == "ellipse") {
        // heights of the ellipse over its best-fit circle
        const ReferenceCurve ell =
            build_reference_curve(CurveSpec::ellipse(c.center, c.semi_a, c.semi_b, c.nodes), cont);
        const EquilibriumFit fit = fit_equilibrium(ell);
        MsState st = make_ms_state(cont, fit.center, fit.radius, c.nodes,
                                   std::vector<double>(c.nodes, 0.0));
        const HeightField hf = reparameterize(ell, st.sigma, st.tube);
        st.rho = hf.rho;
        return st;
    }
    std::vector<double> rho(c.nodes, 0.0);
    if (c.initial == "constant") {
        rho.assign(c.nodes, c.amplitude);
    } else if (c.initial == "mode") {
        for (int j = 0; j < c.nodes; ++j)
            rho[j] = c.amplitude * std::cos(c.mode_k * (2.0 * kPi * j / c.nodes));
    } else if (c.initial == "fourier_decay") {
        std::mt19937 rng(c.seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        for (int k = 2; k <= c.nodes / 2 - 1; ++k) {
            const double amp = c.amplitude * std::pow(static_cast<double>(k), -c.decay_exponent);
            const double ph = phase(rng);
            for (int j = 0; j < c.nodes; ++j)
                rho[j] += amp * std::cos(k * (2.0 * kPi * j / c.nodes) + ph);
        }
    }
    return make_ms_state(cont, c.center, c.radius, c.nodes, std::move(rho));
}

std::vector<double> initial_1d_state(const ExperimentConfig& c) {
    std::vector<double> u(c.mesh, 0.0);
    if (c.equation == "reaction") {
        u.assign(c.mesh, c.initial_amplitude);
    } else {
        for (int j = 1; j <= c.mesh; ++j)
            u[j - 1] = c.initial_amplitude * std::sin(kPi * j / (c.mesh + 1.0));
    }
    return u;
}

std::shared_ptr<QuasilinearProblem> problem_1d(const ExperimentConfig& c) {
    if (c.equation == "heat")
        return make_second_order([](double, double) { return 1.0; },
                                 [](double, double) { return 0.0; }, c.mesh, c.p, c.mu);
    if (c.equation == "quasilinear")
        return make_second_order([](double u, double) { return 1.0 + u * u; },
                                 [](double, double) { return 0.0; }, c.mesh, c.p, c.mu);
    return make_second_order([](double, double) { return 1.0; },
                             [](double u, double) { return u * u; }, c.mesh, c.p, c.mu);
}

EvolveConfig evolve_config(const ExperimentConfig& c) {
    EvolveConfig e;
    e.horizon = c.horizon;
    e.mode = c.mode == "picard" ? EvolveMode::Picard : EvolveMode::SemiImplicit;
    e.steps = c.steps;
    e.window = c.window;
    e.window_steps = c.window_steps;
    e.grading = c.grading;
    e.p = c.p;
    e.mu = c.mu;
    e.monitors = c.monitors;
    return e;
}

} // namespace mslab
