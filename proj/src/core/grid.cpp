#include "regulab/core/grid.hpp"

#include "regulab/core/errors.hpp"

#include <cmath>
#include <string>

namespace regulab {

std::string_view to_string(Boundary bc)
{
    switch (bc) {
    case Boundary::Periodic: return "periodic";
    case Boundary::Dirichlet0: return "dirichlet0";
    case Boundary::Neumann0: return "neumann0";
    }
    return "unknown";
}

Boundary parse_boundary(std::string_view name)
{
    if (name == "periodic") return Boundary::Periodic;
    if (name == "dirichlet0") return Boundary::Dirichlet0;
    if (name == "neumann0") return Boundary::Neumann0;
    throw ValidationError("unknown boundary kind '" + std::string(name) +
                          "' (expected periodic, dirichlet0 or neumann0)");
}

Grid1D::Grid1D(double x_min, double x_max, std::size_t n, Boundary bc)
    : x_min_(x_min), x_max_(x_max), n_(n), bc_(bc), dx_(0.0)
{
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
        throw ValidationError("grid: require x_max > x_min, got [" + std::to_string(x_min) +
                              ", " + std::to_string(x_max) + "]");
    if (n < 4)
        throw ValidationError("grid: require n >= 4, got " + std::to_string(n));
    const double cells = bc == Boundary::Periodic ? static_cast<double>(n)
                                                  : static_cast<double>(n - 1);
    dx_ = (x_max - x_min) / cells;
}

std::vector<double> Grid1D::nodes() const
{
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    if (!periodic()) xs.back() = x_max_;
    return xs;
}

bool Grid1D::operator==(const Grid1D& other) const noexcept
{
    return x_min_ == other.x_min_ && x_max_ == other.x_max_ && n_ == other.n_ &&
           bc_ == other.bc_;
}

Grid1D build_grid(double x_min, double x_max, std::size_t n, Boundary bc)
{
    return Grid1D(x_min, x_max, n, bc);
}

}  // namespace regulab
