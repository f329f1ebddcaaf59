#pragma once

#include "regulab/core/banded.hpp"
#include "regulab/core/field.hpp"

namespace regulab {

// Centred finite-difference operators. Boundary handling:
//   Periodic   - indices wrap.
//   Neumann0   - even ghost reflection u_{-k} = u_k.
//   Dirichlet0 - boundary rows are zero; diff4 uses the odd ghost u_{-1} = -u_1
//                next to the wall, which is the u'' = 0 closure.

Field diff2(const Field& u);
Field diff4(const Field& u);

BandedMatrix diff2_matrix(const Grid1D& grid);
BandedMatrix diff4_matrix(const Grid1D& grid);

/// Discrete symbol of diff2 on a periodic grid for angular wavenumber k:
/// -(4/dx^2) sin^2(k dx / 2). diff4's symbol is its square.
double diff2_symbol(double k, double dx);

}  // namespace regulab
