#include "mslab/cli.hpp"

#include "mslab/config.hpp"
#include "mslab/io.hpp"
#include "mslab/verify.hpp"

#include <cstdlib>
#include <doctest.h>
#include <filesystem>
#include <fstream>

using namespace mslab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void dump(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

const char* kDemoConfig = R"(# mode-2 relaxation demo
kind = ms
mode = semi_implicit
seed = 7

[geometry]
radius = 0.5
nodes = 64

[initial]
type = mode
mode_k = 2
amplitude = 0.02

[grid]
p = 6
mu = 0.75
horizon = 0.02
steps = 100

[output]
dir = OUTDIR
snapshots = 3
)";

std::string demo_config(const std::string& outdir) {
    std::string text = kDemoConfig;
    const std::string token = "OUTDIR";
    text.replace(text.find(token), token.size(), outdir);
    return text;
}

} // namespace

TEST_CASE("config parsing and validation") {
    const ExperimentConfig cfg = parse_config_text(demo_config("/tmp/mslab_demo"));
    CHECK(cfg.kind == "ms");
    CHECK(cfg.nodes == 64);
    CHECK(cfg.amplitude == doctest::Approx(0.02));
    CHECK(cfg.seed == 7);

    // mu at or below the critical weight is rejected, naming the key
    try {
        parse_config_text("kind = ms\n[grid]\np = 6\nmu = 0.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("mu") != std::string::npos);
    }

    // unknown keys are named
    try {
        parse_config_text("kind = ms\n[grid]\nstep_size = 0.1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("step_size") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text("kind = tsunami\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kind = ms\n[monitors]\nball_min = -1\n"), ConfigError);
}

TEST_CASE("cmd_run produces artifacts and exit code 0") {
    const std::string dir = "/tmp/mslab_test_run";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    dump(dir + "/config.txt", demo_config(dir + "/out"));

    const int rc = cmd_run(dir + "/config.txt");
    CHECK(rc == 0);
    CHECK(std::filesystem::exists(dir + "/out/trajectory.csv"));
    CHECK(std::filesystem::exists(dir + "/out/diagnostics.txt"));
    CHECK(std::filesystem::exists(dir + "/out/snapshot_000.svg"));
    CHECK(std::filesystem::exists(dir + "/out/snapshot_002.svg"));

    const std::string csv = slurp(dir + "/out/trajectory.csv");
    CHECK(csv.rfind("t,perimeter,area,residual,ball_radius,eta,xgamma_norm\n", 0) == 0);

    // perimeter column is monotone nonincreasing
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    double prev = 1e300;
    while (std::getline(rows, line)) {
        const size_t c1 = line.find(',');
        const size_t c2 = line.find(',', c1 + 1);
        const double perim = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(perim <= prev + 1e-8);
        prev = perim;
    }

    // reruns are byte-identical
    const int rc2 = cmd_run(dir + "/config.txt");
    CHECK(rc2 == 0);
    CHECK(slurp(dir + "/out/trajectory.csv") == csv);
}

TEST_CASE("cmd_run flags monitored breakdowns with exit code 2") {
    const std::string dir = "/tmp/mslab_test_breach";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::string text = demo_config(dir + "/out");
    text += "\n[monitors]\nball_min = 0.9\n";
    dump(dir + "/config.txt", text);
    CHECK(cmd_run(dir + "/config.txt") == 2);
    CHECK(std::filesystem::exists(dir + "/out/trajectory.csv"));
}

TEST_CASE("cmd_run rejects bad configs with exit code 1") {
    const std::string dir = "/tmp/mslab_test_bad";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    dump(dir + "/config.txt", "kind = ms\n[grid]\nmu = 0.2\n");
    CHECK(cmd_run(dir + "/config.txt") == 1);
    CHECK(cmd_run(dir + "/does_not_exist.txt") == 1);
}

TEST_CASE("quasilinear1d run decays") {
    const std::string dir = "/tmp/mslab_test_1d";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    dump(dir + "/config.txt",
         "kind = quasilinear1d\nmode = semi_implicit\n[problem]\nequation = heat\nmesh = 32\n"
         "[grid]\np = 4\nmu = 0.9\nhorizon = 0.5\nsteps = 200\n[output]\ndir = " +
             dir + "/out\n");
    CHECK(cmd_run(dir + "/config.txt") == 0);
    const std::string csv = slurp(dir + "/out/trajectory.csv");
    CHECK(csv.rfind("t,x0_norm,xgamma_norm,residual\n", 0) == 0);
    // final norm below the initial norm
    std::istringstream rows(csv);
    std::string line, first, last;
    std::getline(rows, line);
    std::getline(rows, first);
    while (std::getline(rows, line))
        if (!line.empty()) last = line;
    const auto second_field = [](const std::string& s) {
        const size_t c1 = s.find(',');
        const size_t c2 = s.find(',', c1 + 1);
        return std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    };
    CHECK(second_field(last) < second_field(first));
}

TEST_CASE("verify suites are deterministic and pass") {
    const VerifyReport a = verify_suite("all", 99);
    const VerifyReport b = verify_suite("all", 99);
    CHECK(a.all_pass());
    CHECK(a.text() == b.text());
    CHECK(verify_suite("geometry", 1).all_pass());
    CHECK(verify_suite("elliptic", 1).all_pass());
    CHECK_THROWS_AS(verify_suite("nonsense", 1), Error);
}

TEST_CASE("cmd_linearize writes the eigenvalue report") {
    const std::string dir = "/tmp/mslab_test_lin";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    dump(dir + "/config.txt",
         "kind = ms\n[geometry]\nradius = 0.5\nnodes = 64\n[initial]\ntype = none\n"
         "[linearize]\nmodes = 6\n[output]\ndir = " +
             dir + "/out\n");
    CHECK(cmd_linearize(dir + "/config.txt") == 0);
    const std::string text = slurp(dir + "/out/linearization.txt");
    CHECK(text.find("verdict normally-stable") != std::string::npos);
    CHECK(text.find("kernel_dim 3") != std::string::npos);

    // off-center circles are equilibria too
    dump(dir + "/config2.txt",
         "kind = ms\n[geometry]\nradius = 0.3\ncenter = 0.1 0.05\nnodes = 64\n"
         "[initial]\ntype = none\n[linearize]\nmodes = 6\n[output]\ndir = " +
             dir + "/out2\n");
    CHECK(cmd_linearize(dir + "/config2.txt") == 0);
    CHECK(slurp(dir + "/out2/linearization.txt").find("normally-stable") != std::string::npos);

    // an ellipse is not an equilibrium
    dump(dir + "/config3.txt",
         "kind = ms\n[geometry]\nbase = ellipse\nsemi_a = 0.5\nsemi_b = 0.4\nnodes = 64\n"
         "[initial]\ntype = none\n[output]\ndir = " +
             dir + "/out3\n");
    CHECK(cmd_linearize(dir + "/config3.txt") == 1);
}

TEST_CASE("output root override") {
    const std::string root = "/tmp/mslab_root_override";
    std::filesystem::remove_all(root);
    setenv("MSLAB_OUTPUT_ROOT", root.c_str(), 1);
    CHECK(resolve_output_dir("exp/a") == root + "/exp/a");
    CHECK(resolve_output_dir("/abs/path") == "/abs/path");
    unsetenv("MSLAB_OUTPUT_ROOT");
    CHECK(resolve_output_dir("exp/a") == "exp/a");
}

TEST_CASE("shipped experiment configs parse and validate") {
    for (const char* name :
         {"mode2_relaxation", "ellipse_relaxation", "rough_data_smoothing", "heat_1d",
          "reaction_blowup", "equilibrium_linearize"}) {
        const std::string path = std::string("experiments/") + name + ".cfg";
        INFO(path);
        CHECK_NOTHROW(load_config(path));
    }
}

TEST_CASE("probe csv lists potential values") {
    const Container cont{1.0, {0.0, 0.0}};
    const ReferenceCurve gamma = build_reference_curve(CurveSpec::circle({0, 0}, 0.5, 64), cont);
    const TwoPhaseSolution sol =
        solve_two_phase(cont, gamma, std::vector<double>(gamma.n, 2.0));
    const std::string csv = probe_csv(sol, {{0.1, 0.0}, {0.0, 0.8}});
    CHECK(csv.rfind("x,y,u\n", 0) == 0);
    // constant data gives u == 2 at both probes
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    int count = 0;
    while (std::getline(rows, line)) {
        const size_t c2 = line.rfind(',');
        CHECK(std::stod(line.substr(c2 + 1)) == doctest::Approx(2.0).epsilon(1e-10));
        ++count;
    }
    CHECK(count == 2);
}

TEST_CASE("curve and height-field files round trip") {
    const Container cont{1.0, {0.0, 0.0}};
    const ReferenceCurve c = build_reference_curve(CurveSpec::ellipse({0, 0}, 0.5, 0.4, 64), cont);
    const ReferenceCurve back = parse_curve_text(curve_text(c));
    CHECK(back.n == c.n);
    for (int j = 0; j < c.n; ++j) CHECK(dist(back.p[j], c.p[j]) < 1e-12);

    const TubeData tube = tube_and_ball(c, cont);
    std::vector<double> rho(c.n);
    for (int j = 0; j < c.n; ++j) rho[j] = 0.05 * tube.a * std::cos(3.0 * c.node_theta(j));
    const HeightField hf = make_height_field(c, tube, rho);
    const HeightField hback = parse_height_field_text(height_field_text(hf));
    for (int j = 0; j < c.n; ++j) CHECK(hback.rho[j] == doctest::Approx(rho[j]).epsilon(1e-14));
}
