#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlpm/assembly.hpp"
#include "nlpm/geometry.hpp"
#include "nlpm/nonlinearity.hpp"

namespace nlpm {

struct CoefficientFields {
    Vector rho; // uniformly elliptic on all nodes
    Vector q;   // nonnegative
};

// validates ellipticity / sign; throws ValidationError
CoefficientFields make_coefficients(const DiscreteGeometry& geom, Vector rho, Vector q);

// Exterior condition u = phi on the exterior nodes, separable in space and
// time. The inverse-problem data are monomials in the transferred variable,
// v = h t^m phi0(x), which pull back to u = h^{1/m} t phi0^{1/m}(x).
struct ExteriorDatum {
    Vector profile;                          // u-variable spatial profile
    std::function<double(double)> time_shape; // u-variable time factor, 0 at t=0
    double T = 1.0;

    // set when constructed through v_monomial
    double h = 0.0;
    double m_exp = 0.0;
    Vector v_profile;

    double value(int node, double t) const { return profile(node) * time_shape(t); }
    double sup_over(double T_max) const;

    static ExteriorDatum zero(const DiscreteGeometry& geom, double T);
    // u-variable datum profile * shape(t); profile must be >= 0 and supported
    // inside W1, shape(0) must vanish
    static ExteriorDatum u_space(const DiscreteGeometry& geom, Vector profile,
                                 std::function<double(double)> shape, double T);
    // transferred-variable monomial h t^m phi0_v
    static ExteriorDatum v_monomial(const DiscreteGeometry& geom, const PowerLaw& law,
                                    Vector phi0_v, double h, double T);
};

struct SpaceTimeField {
    enum class Tag { u, v };
    Matrix values; // (n_steps+1) x n_nodes, row k at time k*dt
    double dt = 0.0;
    Tag tag = Tag::u;

    // per-run diagnostics
    double max_newton_residual = 0.0; // worst accepted relative residual
    int max_newton_iters = 0;
    std::vector<int> overshoot_steps;       // NegativeOvershoot warnings
    std::vector<double> continuation_diffs; // successive-epsilon L2 distances

    int n_steps() const { return static_cast<int>(values.rows()) - 1; }
    double time(int k) const { return k * dt; }
    Vector at(int k) const { return values.row(k).transpose(); }

    // nodewise power-law transform u -> v
    SpaceTimeField to_v(const PowerLaw& law) const;
};

struct ParabolicOptions {
    int n_steps = 128;
    double newton_tol = 1e-9; // relative to the step scale
    int newton_max_iter = 50;
    double damping_floor = 1.0 / 1024.0;
    int eps_k_min = 3;
    int eps_k_max = 12;
    double continuation_rtol = 1e-9; // certifies the epsilon limit
    double overshoot_tol = 1e-6;
};

// One implicit-Euler sweep for the regularized equation
//   M_rho (u^k - u^{k-1})/dt + A Phi_eps(u^k) + M_q u^k = 0  on interior rows,
// exterior rows pinned to the datum. Damped Newton per step; throws
// SolverError("NewtonDivergence") with step diagnostics on failure.
SpaceTimeField solve_parabolic(const DiscreteGeometry& geom, const AssembledForms& forms,
                               const CoefficientFields& coeffs, const RegularizedPowerLaw& reg,
                               const ExteriorDatum& datum, const Vector& u0,
                               const ParabolicOptions& opts,
                               const SpaceTimeField* warm_start = nullptr);

// Continuation eps_k = 2^{-k}, k = eps_k_min .. eps_k_max, warm-starting each
// level from the previous one; the returned field carries the successive
// differences. Throws SolverError("ContinuationStall") when the differences
// fail to decrease over three consecutive levels.
SpaceTimeField solve_parabolic_limit(const DiscreteGeometry& geom, const AssembledForms& forms,
                                     const CoefficientFields& coeffs, const PowerLaw& law,
                                     const ExteriorDatum& datum, const Vector& u0,
                                     const ParabolicOptions& opts);

// L2(omega x (0,T)) distance between two runs on the same grid
double space_time_l2_distance(const DiscreteGeometry& geom, const AssembledForms& forms,
                              const SpaceTimeField& a, const SpaceTimeField& b);
double space_time_l2_norm(const DiscreteGeometry& geom, const AssembledForms& forms,
                          const SpaceTimeField& a);

} // namespace nlpm
