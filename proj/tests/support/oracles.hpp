#pragma once

// Reference computations written independently of the library: dense
// elimination, direct DFT, closed-form solutions.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

using Dense = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting on a copy.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        if (a[c][c] == 0.0) throw std::runtime_error("singular");
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& v)
{
    const std::size_t n = v.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            out[k] += v[j] * std::polar(1.0, -2.0 * pi * double(j * k % n) / double(n));
    return out;
}

inline double max_abs(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Viscous Burgers travelling front joining 1 (left) to 0 (right), speed 1/2.
inline double burgers_front(double x, double t, double eps)
{
    return 0.5 * (1.0 - std::tanh((x - 0.5 * t) / (4.0 * eps)));
}

}  // namespace oracle
