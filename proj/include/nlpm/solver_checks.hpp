#pragma once

#include "nlpm/parabolic.hpp"

namespace nlpm {

// Frozen constant of the positive-part comparison bound, calibrated once on
// the reference configuration (fractional Laplacian, rho = 1, q = 0) as twice
// the worst observed LHS/RHS ratio.
double comparison_constant();

struct ComparisonReport {
    double lhs = 0.0;          // max_t int_omega (u1 - u2)_+ dx
    double rhs_source = 0.0;   // int (F1 - F2)_+ over omega x (0,T)
    double rhs_initial = 0.0;  // int (u01 - u02)_+ over omega
    double rhs_exterior = 0.0; // distance-weighted positive part of Phi(phi1)-Phi(phi2)
    double rhs_total = 0.0;    // C * (source + initial + exterior)
    bool pass = false;         // lhs <= rhs_total
};

// Positive-part comparison of two runs with the same geometry/coefficients.
// Sources F1, F2 are nodal space-time fields (pass empty matrices for zero).
ComparisonReport check_comparison(const DiscreteGeometry& geom, const AssembledForms& forms,
                                  double s, const PowerLaw& law, const SpaceTimeField& run1,
                                  const SpaceTimeField& run2, const ExteriorDatum& data1,
                                  const ExteriorDatum& data2, const Vector& u01,
                                  const Vector& u02, const Matrix& F1 = Matrix(),
                                  const Matrix& F2 = Matrix());

struct StabilityReport {
    double lhs_field = 0.0;    // sup_t || u1 - u2 ||_{H^{-s}}
    double lhs_integral = 0.0; // sup_t || U1 - U2 ||_{H^s}, U_j = int_0^t Phi(u_j)
    double rhs_data = 0.0;     // || Phi(phi1) - Phi(phi2) ||_{L^1(0,T;H^s)}
    double rhs_initial = 0.0;  // || u01 - u02 ||_{H^{-s}}
    double ratio = 0.0;        // (lhs_field + lhs_integral) / (rhs_data + rhs_initial)
};

// Continuity-estimate diagnostics for two q = 0 runs.
StabilityReport check_stability(const DiscreteGeometry& geom, const AssembledForms& forms,
                                const PowerLaw& law, const SpaceTimeField& run1,
                                const SpaceTimeField& run2, const ExteriorDatum& data1,
                                const ExteriorDatum& data2, const Vector& u01,
                                const Vector& u02);

} // namespace nlpm
