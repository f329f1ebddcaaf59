#pragma once

#include <complex>
#include <span>
#include <vector>

namespace regulab {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n) noexcept;

/// Radix-2 discrete Fourier transform, X_k = sum_j v_j exp(-2 pi i j k / n).
/// Rejects lengths that are not a power of two.
std::vector<Complex> dft(std::span<const double> values);
std::vector<Complex> dft(std::span<const Complex> values);

/// Inverse transform including the 1/n factor.
std::vector<Complex> idft(std::span<const Complex> spectrum);

/// Real part of idft; throws if the imaginary residue exceeds `imag_tol`
/// relative to the largest coefficient.
std::vector<double> idft_real(std::span<const Complex> spectrum, double imag_tol = 1e-12);

/// Signed integer frequency of DFT bin j: j for j < n/2, j - n otherwise.
std::ptrdiff_t signed_frequency(std::size_t j, std::size_t n) noexcept;

}  // namespace regulab
