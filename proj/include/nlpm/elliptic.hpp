#pragma once

#include "nlpm/assembly.hpp"
#include "nlpm/geometry.hpp"

namespace nlpm {

// Dirichlet solve for the nonlocal operator: exterior rows are pinned to f,
// interior rows solve A[int,int] u_int = F_int - A[int,ext] f_ext.
// F is a weak-form load on the interior rows (already mass-weighted); pass
// Vector::Zero(n) for the homogeneous problem. f supplies the exterior values
// (entries at interior nodes are ignored).
Vector solve_elliptic(const DiscreteGeometry& geom, const Matrix& A, const Vector& F,
                      const Vector& f_exterior);

// Same with the load given as a nodal source field g (the weak load is
// M_full * g restricted to interior rows). Solves L_K u = g in omega,
// u = f in the exterior.
Vector solve_elliptic_field(const DiscreteGeometry& geom, const Matrix& A, const Matrix& M_full,
                            const Vector& g, const Vector& f_exterior);

// Relative interior residual |A u - rhs| / max(|rhs|, tiny) of a candidate.
double elliptic_residual(const DiscreteGeometry& geom, const Matrix& A, const Vector& F,
                         const Vector& u);

} // namespace nlpm
