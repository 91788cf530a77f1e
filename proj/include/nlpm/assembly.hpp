#pragma once

#include "nlpm/geometry.hpp"
#include "nlpm/kernels.hpp"

namespace nlpm {

// Dense matrices realizing the bilinear form of the nonlocal operator and the
// mass forms on the hat basis. A is kept exactly symmetric by mirroring the
// assembled upper triangle.
struct AssembledForms {
    Matrix A;       // nonlocal stiffness for the given kernel
    Matrix A_unit;  // same quadrature with K = 1 (norms, ellipticity sandwich)
    Matrix M_full;  // mass over the whole mesh support
    Matrix M_omega; // mass over omega
    Matrix M_rho;   // rho-weighted mass over omega
    Matrix M_q;     // q-weighted mass over omega
    // row-sum lumped versions used by the time stepper; together with the
    // M-matrix structure of A they keep the discrete maximum principle
    Vector M_rho_lumped;
    Vector M_q_lumped;
};

// Stiffness of the double-difference form over the truncated square
// [-R, R]^2. Panel pairs sharing a node use power-absorbing Duffy-type
// substitutions with 8-point Gauss; distant pairs a 4-point tensor rule.
// Throws SolverError("QuadratureFailure") on a non-finite entry.
Matrix assemble_stiffness(const DiscreteGeometry& geom, const KernelSpec& kernel);

// Quadrature of the |y| > R contribution dropped by the truncation, tested
// against the constant function and the given row's hat. This is the per-row
// size of the constants-null-space violation of the untruncated form; it
// decays like R^{-2s} for rows away from the boundary.
double truncation_row_deficit(const DiscreteGeometry& geom, const KernelSpec& kernel, int row);

// Plain mass matrix over the full mesh support.
Matrix assemble_mass_full(const DiscreteGeometry& geom);

// Mass over omega with a piecewise-linear nodal weight (pass ones for the
// plain omega mass).
Matrix assemble_mass_omega(const DiscreteGeometry& geom, const Vector& weight);

AssembledForms assemble_forms(const DiscreteGeometry& geom, const KernelSpec& kernel,
                              const Vector& rho, const Vector& q);

// Gagliardo seminorm of a nodal field, evaluated with the assembly quadrature
// (unit kernel).
double discrete_seminorm(const DiscreteGeometry& geom, double s, const Vector& field);
double discrete_seminorm(const Matrix& A_unit, const Vector& field);

// Full discrete H^s norm: sqrt(||f||_{L^2}^2 + [f]^2).
double discrete_hs_norm(const AssembledForms& forms, const Vector& field);

// sup over psi of <f,psi>/||psi||_G with ||psi||_G^2 = psi' G psi, computed by
// solving the Gram system. f and G live on the same index set.
double discrete_dual_norm(const Matrix& gram, const Vector& functional);

// Smallest eigenvalue of the interior block (coercivity diagnostics).
double smallest_interior_eigenvalue(const DiscreteGeometry& geom, const Matrix& A);

} // namespace nlpm
