#pragma once

#include "nlpm/dn_map.hpp"
#include "nlpm/parabolic.hpp"

namespace nlpm {

// Time-integral transform of a run: V(x) = int_0^T0 (T0 - t)^beta v(x,t) dt
// with v = Phi(u), together with the interior source fields
//   M_cal = beta rho int (T0-t)^{beta-1} Phi^{-1}(v) dt,
//   N_cal = q int (T0-t)^beta Phi^{-1}(v) dt,
// so that A V + M_omega (M_cal + N_cal) vanishes on interior rows up to the
// time-quadrature error.
struct TransformedField {
    Vector V;
    Vector M_cal;
    Vector N_cal;
    double T0 = 0.0;
    double beta = 0.0;
    double h = 0.0;
    double interior_residual = 0.0; // relative, mass-weighted weak form
};

TransformedField time_integral_transform(const DiscreteGeometry& geom,
                                         const AssembledForms& forms,
                                         const CoefficientFields& coeffs, const PowerLaw& law,
                                         const SpaceTimeField& run_u, const ExteriorDatum& datum,
                                         double T0, double beta);

// Two-term expansion of V around the large-amplitude limit:
//   V = h c0 V0 + R1 = h c0 V0 + h^{1/m} V1 + R2,
// where V0 solves the homogeneous Dirichlet problem with exterior value phi0,
// V1 the interior problem with the load -(cM rho + cN q) (V0)^{1/m}, and the
// remainders are defined by the identities themselves. The time factors cM,
// cN are computed by quadrature; the sources of the first correction are kept
// for the sign diagnostics.
struct AsymptoticDecomposition {
    Vector V0;
    Vector V1;
    Vector R1;
    Vector R2;
    double c0 = 0.0;      // B(beta+1, m+1) T0^{beta+m+1}
    double cM_quad = 0.0; // beta int_0^T0 (T0-t)^{beta-1} t dt
    double cN_quad = 0.0; // int_0^T0 (T0-t)^beta t dt
    Vector M1_cal;        // h^{1/m} cM rho (V0)^{1/m}
    Vector N1_cal;        // h^{1/m} cN q (V0)^{1/m}
};

AsymptoticDecomposition decompose_transform(const DiscreteGeometry& geom,
                                            const AssembledForms& forms,
                                            const CoefficientFields& coeffs, const PowerLaw& law,
                                            const TransformedField& tf, const Vector& phi0_v);

// quadrature values of the two time factors (independent of any closed form)
double correction_time_factor_M(double T0, double beta);
double correction_time_factor_N(double T0, double beta);

} // namespace nlpm
