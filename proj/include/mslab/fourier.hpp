#pragma once

#include <complex>
#include <vector>

namespace mslab {

bool is_pow2(int n);

// In-place radix-2 FFT, forward convention sum f_j e^{-i k t_j}. The inverse
// includes the 1/N factor.
void fft(std::vector<std::complex<double>>& a, bool inverse);

// Real trigonometric series f(t) = c[0] + sum_{k=1}^{M} (c[k] cos kt + s[k] sin kt)
// obtained from N = 2M equispaced samples. s[M] is kept zero (Nyquist mode is
// represented as a pure cosine).
struct TrigSeries {
    std::vector<double> c; // size M+1
    std::vector<double> s; // size M+1, s[0] = s[M] = 0

    int max_mode() const { return static_cast<int>(c.size()) - 1; }
};

TrigSeries trig_analyze(const std::vector<double>& values);
std::vector<double> trig_synthesize(const TrigSeries& f, int n);

double trig_eval(const TrigSeries& f, double t);
// order >= 1 analytic derivative of the truncated series
double trig_eval_derivative(const TrigSeries& f, double t, int order);

// Spectral derivative of periodic samples (order >= 1). Odd orders zero the
// Nyquist mode.
std::vector<double> spectral_derivative(const std::vector<double>& values, int order);

} // namespace mslab
