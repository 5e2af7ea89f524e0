#include "mslab/fourier.hpp"

#include <cmath>
#include <doctest.h>
#include <random>

using namespace mslab;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("trig analyze/synthesize round trip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 64;
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    const TrigSeries f = trig_analyze(v);
    const std::vector<double> w = trig_synthesize(f, n);
    for (int j = 0; j < n; ++j) CHECK(w[j] == doctest::Approx(v[j]).epsilon(1e-12));
}

TEST_CASE("trig_eval matches samples and interpolates trig polynomials") {
    const int n = 32;
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        v[j] = 0.3 + std::cos(3.0 * t) - 0.5 * std::sin(5.0 * t);
    }
    const TrigSeries f = trig_analyze(v);
    for (double t : {0.13, 1.9, 4.0}) {
        CHECK(trig_eval(f, t) ==
              doctest::Approx(0.3 + std::cos(3 * t) - 0.5 * std::sin(5 * t)).epsilon(1e-12));
        CHECK(trig_eval_derivative(f, t, 1) ==
              doctest::Approx(-3 * std::sin(3 * t) - 2.5 * std::cos(5 * t)).epsilon(1e-12));
    }
}

TEST_CASE("spectral derivative exact on resolved modes") {
    const int n = 64;
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        v[j] = std::sin(7.0 * t);
    }
    const std::vector<double> d1 = spectral_derivative(v, 1);
    const std::vector<double> d2 = spectral_derivative(v, 2);
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / n;
        CHECK(d1[j] == doctest::Approx(7.0 * std::cos(7.0 * t)).epsilon(1e-10));
        CHECK(d2[j] == doctest::Approx(-49.0 * std::sin(7.0 * t)).epsilon(1e-10));
    }
}
