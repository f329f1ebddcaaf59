#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace regulab {

enum class Boundary { Periodic, Dirichlet0, Neumann0 };

std::string_view to_string(Boundary bc);
Boundary parse_boundary(std::string_view name);

/// Uniform node-centred 1-D mesh.
///
/// Periodic grids hold n nodes x_j = x_min + j*dx with dx = (x_max - x_min)/n;
/// the node at x_max is identified with x_min and not stored. Dirichlet0 and
/// Neumann0 grids include both endpoints, dx = (x_max - x_min)/(n - 1).
class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n, Boundary bc);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    Boundary bc() const noexcept { return bc_; }
    bool periodic() const noexcept { return bc_ == Boundary::Periodic; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return x_max_ - x_min_; }

    double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }
    std::vector<double> nodes() const;

    /// Number of cells between nodes: n for periodic grids, n - 1 otherwise.
    std::size_t cell_count() const noexcept { return periodic() ? n_ : n_ - 1; }

    bool operator==(const Grid1D& other) const noexcept;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    Boundary bc_;
    double dx_;
};

Grid1D build_grid(double x_min, double x_max, std::size_t n, Boundary bc);

}  // namespace regulab
