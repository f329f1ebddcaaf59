#include "regulab/core/fft.hpp"

#include "regulab/core/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace regulab {

namespace {

void transform(std::vector<Complex>& a, bool inverse)
{
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw ValidationError("dft: length " + std::to_string(n) + " is not a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // Twiddles are evaluated directly rather than by recurrence.
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<Complex> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex t = w[k * stride] * a[i + k + len / 2];
                a[i + k + len / 2] = a[i + k] - t;
                a[i + k] += t;
            }
        }
    }
    if (inverse)
        for (auto& c : a) c /= static_cast<double>(n);
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::vector<Complex> dft(std::span<const double> values)
{
    std::vector<Complex> a(values.begin(), values.end());
    transform(a, false);
    return a;
}

std::vector<Complex> dft(std::span<const Complex> values)
{
    std::vector<Complex> a(values.begin(), values.end());
    transform(a, false);
    return a;
}

std::vector<Complex> idft(std::span<const Complex> spectrum)
{
    std::vector<Complex> a(spectrum.begin(), spectrum.end());
    transform(a, true);
    return a;
}

std::vector<double> idft_real(std::span<const Complex> spectrum, double imag_tol)
{
    const auto a = idft(spectrum);
    double scale = 0.0;
    double imag = 0.0;
    for (const auto& c : a) {
        scale = std::max(scale, std::abs(c.real()));
        imag = std::max(imag, std::abs(c.imag()));
    }
    if (imag > imag_tol * std::max(scale, 1e-300))
        throw ValidationError("idft_real: imaginary residue " + std::to_string(imag) +
                              " exceeds tolerance");
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j].real();
    return out;
}

std::ptrdiff_t signed_frequency(std::size_t j, std::size_t n) noexcept
{
    return j < n / 2 ? static_cast<std::ptrdiff_t>(j)
                     : static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(n);
}

}  // namespace regulab
