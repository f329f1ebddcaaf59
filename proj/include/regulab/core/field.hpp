#pragma once

#include "regulab/core/grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace regulab {

/// Nodal real-valued function on a Grid1D.
///
/// Construction checks that every value is finite and, on Dirichlet0 grids,
/// that both boundary values are exactly zero.
class Field {
public:
    Field(Grid1D grid, std::vector<double> values);

    static Field zeros(const Grid1D& grid);
    static Field constant(const Grid1D& grid, double c);

    /// Samples f at the nodes. On Dirichlet0 grids the boundary nodes are set
    /// to zero regardless of f, since the boundary condition owns them.
    static Field sample(const Grid1D& grid, const std::function<double(double)>& f);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }

    /// Moves the storage out; the Field is left empty.
    std::vector<double> release() && { return std::move(values_); }

private:
    Grid1D grid_;
    std::vector<double> values_;
};

double norm_inf(std::span<const double> v);
/// Grid-weighted norms: sum |v_j| dx and sqrt(sum v_j^2 dx).
double norm_l1(std::span<const double> v, double dx);
double norm_l2(std::span<const double> v, double dx);

double max_abs_diff(std::span<const double> a, std::span<const double> b);
double l1_distance(const Field& a, const Field& b);
double l2_distance(const Field& a, const Field& b);

/// sum_j u_j dx, i.e. the discrete mass on periodic grids.
double mass(const Field& u);

void require_same_grid(const Field& a, const Field& b, const char* where);

}  // namespace regulab
