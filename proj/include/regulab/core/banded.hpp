#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace regulab {

/// Square band matrix stored by diagonal offset.
///
/// Entry (i, i + k) for k in [-lower, upper] lives at band_[i * width + lower + k].
/// A cyclic matrix wraps column indices modulo n, which is how periodic
/// stencils are assembled; a non-cyclic matrix ignores out-of-range columns
/// (they must stay zero).
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper, bool cyclic = false);

    static BandedMatrix identity(std::size_t n, bool cyclic = false);

    std::size_t size() const noexcept { return n_; }
    std::size_t lower() const noexcept { return lower_; }
    std::size_t upper() const noexcept { return upper_; }
    bool cyclic() const noexcept { return cyclic_; }

    double& at(std::size_t row, std::ptrdiff_t offset);
    double at(std::size_t row, std::ptrdiff_t offset) const;

    /// Column index of (row, offset), wrapped for cyclic matrices; -1 when the
    /// entry falls outside a non-cyclic matrix.
    std::ptrdiff_t column(std::size_t row, std::ptrdiff_t offset) const noexcept;

    std::vector<double> apply(std::span<const double> x) const;

    /// alpha * I + beta * this, same band structure.
    BandedMatrix affine(double alpha, double beta) const;

    double row_scale(std::size_t row) const noexcept;

private:
    std::size_t n_;
    std::size_t lower_;
    std::size_t upper_;
    bool cyclic_;
    std::vector<double> band_;
};

/// LU factorization of a BandedMatrix with partial pivoting.
///
/// Cyclic matrices are split into the non-wrapping band B plus a low-rank
/// corner correction and solved through the Woodbury identity, so the cost
/// stays linear in n. Throws SingularMatrixError when a pivot magnitude drops
/// below 1e-14 times the scale of its row.
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& a);

    std::size_t size() const noexcept { return n_; }
    std::vector<double> solve(std::span<const double> b) const;
    void solve_in_place(std::span<double> x) const;

private:
    void band_solve(std::span<double> x) const;

    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::size_t width_;
    std::vector<double> lu_;
    std::vector<std::size_t> pivots_;

    // Woodbury correction for cyclic corners: A = B + U V^T with U = e_rows.
    std::vector<std::size_t> corner_rows_;
    std::vector<std::vector<std::pair<std::size_t, double>>> corner_entries_;
    std::vector<std::vector<double>> z_;   // B^{-1} e_r for each corner row
    std::vector<double> capacitance_lu_;   // dense LU of I + V^T Z
    std::vector<std::size_t> capacitance_piv_;
};

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> b);

}  // namespace regulab
