#include "regulab/core/field.hpp"

#include "regulab/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regulab {

Field::Field(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size())
        throw ValidationError("field: expected " + std::to_string(grid_.size()) +
                              " values, got " + std::to_string(values_.size()));
    for (std::size_t j = 0; j < values_.size(); ++j)
        if (!std::isfinite(values_[j]))
            throw ValidationError("field: non-finite value at node " + std::to_string(j));
    if (grid_.bc() == Boundary::Dirichlet0 && (values_.front() != 0.0 || values_.back() != 0.0))
        throw ValidationError("field: Dirichlet0 boundary values must be exactly zero");
}

Field Field::zeros(const Grid1D& grid)
{
    return Field(grid, std::vector<double>(grid.size(), 0.0));
}

Field Field::constant(const Grid1D& grid, double c)
{
    std::vector<double> v(grid.size(), c);
    if (grid.bc() == Boundary::Dirichlet0) v.front() = v.back() = 0.0;
    return Field(grid, std::move(v));
}

Field Field::sample(const Grid1D& grid, const std::function<double(double)>& f)
{
    const auto xs = grid.nodes();
    std::vector<double> v(xs.size());
    std::transform(xs.begin(), xs.end(), v.begin(), f);
    if (grid.bc() == Boundary::Dirichlet0) v.front() = v.back() = 0.0;
    return Field(grid, std::move(v));
}

double norm_inf(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm_l1(std::span<const double> v, double dx)
{
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s * dx;
}

double norm_l2(std::span<const double> v, double dx)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * dx);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw ValidationError("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

void require_same_grid(const Field& a, const Field& b, const char* where)
{
    if (!(a.grid() == b.grid()))
        throw ValidationError(std::string(where) + ": fields live on different grids");
}

double l1_distance(const Field& a, const Field& b)
{
    require_same_grid(a, b, "l1_distance");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
    return s * a.grid().dx();
}

double l2_distance(const Field& a, const Field& b)
{
    require_same_grid(a, b, "l2_distance");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s * a.grid().dx());
}

double mass(const Field& u)
{
    double s = 0.0;
    for (double x : u.values()) s += x;
    return s * u.grid().dx();
}

}  // namespace regulab
