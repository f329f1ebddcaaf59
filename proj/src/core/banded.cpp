#include "regulab/core/banded.hpp"

#include "regulab/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regulab {

namespace {

constexpr double kPivotTolerance = 1e-14;

// Dense LU with partial pivoting for the small Woodbury capacitance matrix.
void dense_factor(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t m)
{
    std::vector<double> scale(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) scale[i] = std::max(scale[i], std::abs(a[i * m + j]));
    piv.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < m; ++i)
            if (std::abs(a[i * m + k]) > std::abs(a[p * m + k])) p = i;
        piv[k] = p;
        if (scale[p] == 0.0 || std::abs(a[p * m + k]) <= kPivotTolerance * scale[p])
            throw SingularMatrixError("banded solve: singular cyclic corner system");
        if (p != k) {
            for (std::size_t j = 0; j < m; ++j) std::swap(a[k * m + j], a[p * m + j]);
            std::swap(scale[k], scale[p]);
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            const double l = a[i * m + k] / a[k * m + k];
            a[i * m + k] = l;
            for (std::size_t j = k + 1; j < m; ++j) a[i * m + j] -= l * a[k * m + j];
        }
    }
}

void dense_solve(const std::vector<double>& lu, const std::vector<std::size_t>& piv,
                 std::size_t m, std::vector<double>& x)
{
    for (std::size_t k = 0; k < m; ++k) {
        std::swap(x[k], x[piv[k]]);
        for (std::size_t i = k + 1; i < m; ++i) x[i] -= lu[i * m + k] * x[k];
    }
    for (std::size_t k = m; k-- > 0;) {
        for (std::size_t j = k + 1; j < m; ++j) x[k] -= lu[k * m + j] * x[j];
        x[k] /= lu[k * m + k];
    }
}

}  // namespace

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper, bool cyclic)
    : n_(n), lower_(lower), upper_(upper), cyclic_(cyclic),
      band_(n * (lower + upper + 1), 0.0)
{
    if (n == 0) throw ValidationError("banded matrix: empty");
    if (lower >= n || upper >= n)
        throw ValidationError("banded matrix: bandwidths must be smaller than n");
    if (cyclic && lower + upper >= n)
        throw ValidationError("banded matrix: cyclic band wraps onto itself (lower + upper >= n)");
}

BandedMatrix BandedMatrix::identity(std::size_t n, bool cyclic)
{
    BandedMatrix m(n, 0, 0, cyclic);
    for (std::size_t i = 0; i < n; ++i) m.at(i, 0) = 1.0;
    return m;
}

double& BandedMatrix::at(std::size_t row, std::ptrdiff_t offset)
{
    return band_[row * (lower_ + upper_ + 1) + static_cast<std::size_t>(
                     static_cast<std::ptrdiff_t>(lower_) + offset)];
}

double BandedMatrix::at(std::size_t row, std::ptrdiff_t offset) const
{
    return band_[row * (lower_ + upper_ + 1) + static_cast<std::size_t>(
                     static_cast<std::ptrdiff_t>(lower_) + offset)];
}

std::ptrdiff_t BandedMatrix::column(std::size_t row, std::ptrdiff_t offset) const noexcept
{
    const auto n = static_cast<std::ptrdiff_t>(n_);
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(row) + offset;
    if (cyclic_) return ((j % n) + n) % n;
    return (j < 0 || j >= n) ? -1 : j;
}

std::vector<double> BandedMatrix::apply(std::span<const double> x) const
{
    if (x.size() != n_) throw ValidationError("banded apply: size mismatch");
    std::vector<double> y(n_, 0.0);
    const auto lo = -static_cast<std::ptrdiff_t>(lower_);
    const auto hi = static_cast<std::ptrdiff_t>(upper_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::ptrdiff_t k = lo; k <= hi; ++k) {
            const auto j = column(i, k);
            if (j >= 0) s += at(i, k) * x[static_cast<std::size_t>(j)];
        }
        y[i] = s;
    }
    return y;
}

BandedMatrix BandedMatrix::affine(double alpha, double beta) const
{
    BandedMatrix m = *this;
    for (double& v : m.band_) v *= beta;
    for (std::size_t i = 0; i < n_; ++i) m.at(i, 0) += alpha;
    return m;
}

double BandedMatrix::row_scale(std::size_t row) const noexcept
{
    double s = 0.0;
    for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(lower_);
         k <= static_cast<std::ptrdiff_t>(upper_); ++k)
        if (column(row, k) >= 0) s = std::max(s, std::abs(at(row, k)));
    return s;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.size()), kl_(a.lower()), ku_(a.upper()), width_(2 * a.lower() + a.upper() + 1),
      lu_(a.size() * (2 * a.lower() + a.upper() + 1), 0.0), pivots_(a.size())
{
    const auto n = static_cast<std::ptrdiff_t>(n_);
    const auto lo = -static_cast<std::ptrdiff_t>(kl_);
    const auto hi = static_cast<std::ptrdiff_t>(ku_);
    std::vector<double> scale(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        scale[i] = a.row_scale(i);
        for (std::ptrdiff_t k = lo; k <= hi; ++k) {
            const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
            if (j >= 0 && j < n) {
                lu_[i * width_ + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(kl_) + k)] =
                    a.at(i, k);
            } else if (a.cyclic() && a.at(i, k) != 0.0) {
                if (corner_rows_.empty() || corner_rows_.back() != i) {
                    corner_rows_.push_back(i);
                    corner_entries_.emplace_back();
                }
                corner_entries_.back().emplace_back(static_cast<std::size_t>(a.column(i, k)),
                                                    a.at(i, k));
            }
        }
    }

    auto idx = [&](std::size_t i, std::size_t j) { return i * width_ + (j + kl_ - i); };
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t imax = std::min(n_ - 1, k + kl_);
        const std::size_t jmax = std::min(n_ - 1, k + kl_ + ku_);
        std::size_t p = k;
        for (std::size_t i = k + 1; i <= imax; ++i)
            if (std::abs(lu_[idx(i, k)]) > std::abs(lu_[idx(p, k)])) p = i;
        pivots_[k] = p;
        if (scale[p] == 0.0 || std::abs(lu_[idx(p, k)]) <= kPivotTolerance * scale[p])
            throw SingularMatrixError("banded solve: pivot " + std::to_string(k) +
                                      " below 1e-14 of its row scale");
        if (p != k) {
            for (std::size_t j = k; j <= jmax; ++j) std::swap(lu_[idx(k, j)], lu_[idx(p, j)]);
            std::swap(scale[k], scale[p]);
        }
        const double pivot = lu_[idx(k, k)];
        for (std::size_t i = k + 1; i <= imax; ++i) {
            const double l = lu_[idx(i, k)] / pivot;
            lu_[idx(i, k)] = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j <= jmax; ++j) lu_[idx(i, j)] -= l * lu_[idx(k, j)];
        }
    }

    if (corner_rows_.empty()) return;
    const std::size_t m = corner_rows_.size();
    z_.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
        z_[r].assign(n_, 0.0);
        z_[r][corner_rows_[r]] = 1.0;
        band_solve(z_[r]);
    }
    capacitance_lu_.assign(m * m, 0.0);
    for (std::size_t a_ = 0; a_ < m; ++a_) {
        for (std::size_t b_ = 0; b_ < m; ++b_) {
            double s = a_ == b_ ? 1.0 : 0.0;
            for (const auto& [col, v] : corner_entries_[a_]) s += v * z_[b_][col];
            capacitance_lu_[a_ * m + b_] = s;
        }
    }
    dense_factor(capacitance_lu_, capacitance_piv_, m);
}

void BandedLU::band_solve(std::span<double> x) const
{
    auto idx = [&](std::size_t i, std::size_t j) { return i * width_ + (j + kl_ - i); };
    for (std::size_t k = 0; k < n_; ++k) {
        std::swap(x[k], x[pivots_[k]]);
        const std::size_t imax = std::min(n_ - 1, k + kl_);
        for (std::size_t i = k + 1; i <= imax; ++i) x[i] -= lu_[idx(i, k)] * x[k];
    }
    for (std::size_t k = n_; k-- > 0;) {
        const std::size_t jmax = std::min(n_ - 1, k + kl_ + ku_);
        double s = x[k];
        for (std::size_t j = k + 1; j <= jmax; ++j) s -= lu_[idx(k, j)] * x[j];
        x[k] = s / lu_[idx(k, k)];
    }
}

void BandedLU::solve_in_place(std::span<double> x) const
{
    if (x.size() != n_) throw ValidationError("banded solve: size mismatch");
    band_solve(x);
    if (corner_rows_.empty()) return;
    const std::size_t m = corner_rows_.size();
    std::vector<double> q(m, 0.0);
    for (std::size_t a_ = 0; a_ < m; ++a_)
        for (const auto& [col, v] : corner_entries_[a_]) q[a_] += v * x[col];
    dense_solve(capacitance_lu_, capacitance_piv_, m, q);
    for (std::size_t b_ = 0; b_ < m; ++b_)
        for (std::size_t i = 0; i < n_; ++i) x[i] -= z_[b_][i] * q[b_];
}

std::vector<double> BandedLU::solve(std::span<const double> b) const
{
    std::vector<double> x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> b)
{
    return BandedLU(a).solve(b);
}

}  // namespace regulab
