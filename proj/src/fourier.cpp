#include "mslab/fourier.hpp"

#include "mslab/errors.hpp"

#include <cmath>

namespace mslab {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const int n = static_cast<int>(a.size());
    if (!is_pow2(n)) throw ParameterOutOfRange("fft size must be a power of two");
    // bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = std::acos(-1.0);
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / len * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& z : a) z /= static_cast<double>(n);
    }
}

TrigSeries trig_analyze(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    if (!is_pow2(n) || n < 4) throw ParameterOutOfRange("trig_analyze needs a power-of-two sample count >= 4");
    std::vector<std::complex<double>> a(values.begin(), values.end());
    fft(a, false);
    const int m = n / 2;
    TrigSeries f;
    f.c.assign(m + 1, 0.0);
    f.s.assign(m + 1, 0.0);
    f.c[0] = a[0].real() / n;
    for (int k = 1; k < m; ++k) {
        f.c[k] = 2.0 * a[k].real() / n;
        f.s[k] = -2.0 * a[k].imag() / n;
    }
    f.c[m] = a[m].real() / n;
    return f;
}

std::vector<double> trig_synthesize(const TrigSeries& f, int n) {
    if (!is_pow2(n)) throw ParameterOutOfRange("trig_synthesize needs a power-of-two sample count");
    const int m = f.max_mode();
    if (n / 2 < m) throw ParameterOutOfRange("trig_synthesize sample count too small for series");
    std::vector<std::complex<double>> a(n, 0.0);
    a[0] = std::complex<double>(f.c[0] * n, 0.0);
    for (int k = 1; k <= m && k < n / 2; ++k) {
        std::complex<double> z(0.5 * f.c[k] * n, -0.5 * f.s[k] * n);
        a[k] = z;
        a[n - k] = std::conj(z);
    }
    if (m == n / 2) a[n / 2] = std::complex<double>(f.c[m] * n, 0.0);
    fft(a, true);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = a[j].real();
    return out;
}

double trig_eval(const TrigSeries& f, double t) {
    double acc = f.c[0];
    const int m = f.max_mode();
    for (int k = 1; k <= m; ++k)
        acc += f.c[k] * std::cos(k * t) + f.s[k] * std::sin(k * t);
    return acc;
}

double trig_eval_derivative(const TrigSeries& f, double t, int order) {
    const int m = f.max_mode();
    double acc = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double kp = std::pow(static_cast<double>(k), order);
        double ck = f.c[k], sk = f.s[k];
        // Nyquist pure-cosine mode has no well-defined odd derivative; drop it.
        if (k == m && order % 2 == 1) continue;
        switch (order % 4) {
            case 0: acc += kp * (ck * std::cos(k * t) + sk * std::sin(k * t)); break;
            case 1: acc += kp * (-ck * std::sin(k * t) + sk * std::cos(k * t)); break;
            case 2: acc += kp * (-ck * std::cos(k * t) - sk * std::sin(k * t)); break;
            case 3: acc += kp * (ck * std::sin(k * t) - sk * std::cos(k * t)); break;
        }
    }
    return acc;
}

std::vector<double> spectral_derivative(const std::vector<double>& values, int order) {
    const int n = static_cast<int>(values.size());
    if (!is_pow2(n)) throw ParameterOutOfRange("spectral_derivative needs power-of-two samples");
    std::vector<std::complex<double>> a(values.begin(), values.end());
    fft(a, false);
    const std::complex<double> iu(0.0, 1.0);
    for (int k = 0; k <= n / 2; ++k) {
        const int kk = k;
        std::complex<double> mult = std::pow(iu * static_cast<double>(kk), order);
        if (k == n / 2 && order % 2 == 1) mult = 0.0;
        a[k] *= mult;
        if (k >= 1 && k < n / 2) {
            std::complex<double> multn = std::pow(-iu * static_cast<double>(kk), order);
            a[n - k] *= multn;
        }
    }
    fft(a, true);
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = a[j].real();
    return out;
}

} // namespace mslab
