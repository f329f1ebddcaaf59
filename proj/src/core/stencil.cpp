#include "regulab/core/stencil.hpp"

#include <cmath>

namespace regulab {

namespace {

// Applies a banded matrix to a field and rewraps the result on the same grid.
Field apply_on(const BandedMatrix& m, const Field& u)
{
    return Field(u.grid(), m.apply(u.values()));
}

}  // namespace

BandedMatrix diff2_matrix(const Grid1D& grid)
{
    const std::size_t n = grid.size();
    const double c = 1.0 / (grid.dx() * grid.dx());
    BandedMatrix m(n, 1, 1, grid.periodic());
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, -1) = c;
        m.at(i, 0) = -2.0 * c;
        m.at(i, 1) = c;
    }
    switch (grid.bc()) {
    case Boundary::Periodic: break;
    case Boundary::Dirichlet0:
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            m.at(i, -1) = m.at(i, 0) = m.at(i, 1) = 0.0;
        }
        break;
    case Boundary::Neumann0:
        m.at(0, -1) = 0.0;
        m.at(0, 1) = 2.0 * c;
        m.at(n - 1, 1) = 0.0;
        m.at(n - 1, -1) = 2.0 * c;
        break;
    }
    return m;
}

BandedMatrix diff4_matrix(const Grid1D& grid)
{
    const std::size_t n = grid.size();
    const double dx2 = grid.dx() * grid.dx();
    const double c = 1.0 / (dx2 * dx2);
    BandedMatrix m(n, 2, 2, grid.periodic());
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, -2) = c;
        m.at(i, -1) = -4.0 * c;
        m.at(i, 0) = 6.0 * c;
        m.at(i, 1) = -4.0 * c;
        m.at(i, 2) = c;
    }
    auto clear_row = [&](std::size_t i) {
        for (std::ptrdiff_t k = -2; k <= 2; ++k) m.at(i, k) = 0.0;
    };
    switch (grid.bc()) {
    case Boundary::Periodic: break;
    case Boundary::Dirichlet0:
        // Rows 0 and n-1 are fixed by the boundary condition. Row 1 sees the
        // odd ghost u_{-1} = -u_1 (u_0 = 0): u_{-1} - 4u_0 + 6u_1 - 4u_2 + u_3.
        clear_row(0);
        clear_row(n - 1);
        m.at(1, -2) = 0.0;
        m.at(1, 0) = 5.0 * c;
        m.at(n - 2, 2) = 0.0;
        m.at(n - 2, 0) = 5.0 * c;
        break;
    case Boundary::Neumann0:
        // Even reflection u_{-k} = u_k on both sides.
        m.at(0, -2) = m.at(0, -1) = 0.0;
        m.at(0, 1) = -8.0 * c;
        m.at(0, 2) = 2.0 * c;
        m.at(1, -2) = 0.0;
        m.at(1, 0) = 7.0 * c;
        m.at(n - 1, 2) = m.at(n - 1, 1) = 0.0;
        m.at(n - 1, -1) = -8.0 * c;
        m.at(n - 1, -2) = 2.0 * c;
        m.at(n - 2, 2) = 0.0;
        m.at(n - 2, 0) = 7.0 * c;
        break;
    }
    return m;
}

Field diff2(const Field& u) { return apply_on(diff2_matrix(u.grid()), u); }

Field diff4(const Field& u) { return apply_on(diff4_matrix(u.grid()), u); }

double diff2_symbol(double k, double dx)
{
    const double s = std::sin(0.5 * k * dx);
    return -4.0 * s * s / (dx * dx);
}

}  // namespace regulab
