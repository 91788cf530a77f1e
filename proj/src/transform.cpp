#include "nlpm/transform.hpp"

#include <cmath>

#include "nlpm/elliptic.hpp"
#include "nlpm/errors.hpp"
#include "nlpm/special_functions.hpp"

namespace nlpm {

namespace {

// composite Simpson on a fixed fine grid; deterministic and plenty accurate
// for the smooth weights involved
double fine_quadrature(const std::function<double(double)>& f, double a, double b)
{
    const int n = 4096;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

double correction_time_factor_M(double T0, double beta)
{
    return beta *
           fine_quadrature([&](double t) { return std::pow(T0 - t, beta - 1.0) * t; }, 0.0, T0);
}

double correction_time_factor_N(double T0, double beta)
{
    return fine_quadrature([&](double t) { return std::pow(T0 - t, beta) * t; }, 0.0, T0);
}

TransformedField time_integral_transform(const DiscreteGeometry& geom,
                                         const AssembledForms& forms,
                                         const CoefficientFields& coeffs, const PowerLaw& law,
                                         const SpaceTimeField& run_u, const ExteriorDatum& datum,
                                         double T0, double beta)
{
    validate_beta(beta, law.exponent());
    const double kf = T0 / run_u.dt;
    const int kT = static_cast<int>(std::round(kf));
    if (std::fabs(kf - kT) > 1e-9 * std::max(1.0, kf))
        throw ValidationError("GridMisaligned", "T0 must be a multiple of the time step");
    if (kT > run_u.n_steps())
        throw ValidationError("BadHorizon", "T0 exceeds the run horizon");

    const int n = geom.n();
    TransformedField tf;
    tf.T0 = T0;
    tf.beta = beta;
    tf.h = datum.h;
    tf.V = Vector::Zero(n);
    Vector IM = Vector::Zero(n); // int (T0-t)^{beta-1} u dt
    Vector IN = Vector::Zero(n); // int (T0-t)^beta u dt

    for (int k = 0; k <= kT; ++k) {
        const double t = run_u.time(k);
        const double trap = ((k == 0 || k == kT) ? 0.5 : 1.0) * run_u.dt;
        const double wV = std::pow(T0 - t, beta);
        const double wM = (k == kT) ? 0.0 : std::pow(T0 - t, beta - 1.0);
        for (int j = 0; j < n; ++j) {
            const double u = run_u.values(k, j);
            tf.V(j) += trap * wV * law.phi(u);
            IM(j) += trap * wM * u;
            IN(j) += trap * wV * u;
        }
    }

    tf.M_cal = beta * coeffs.rho.cwiseProduct(IM);
    tf.N_cal = coeffs.q.cwiseProduct(IN);

    // weak interior residual of A V = -(M_cal + N_cal); the mass application
    // is lumped, matching the realization enforced by the time stepper
    const Vector lhs = forms.A * tf.V;
    const Vector rhs = forms.M_rho_lumped.cwiseProduct(beta * IM) +
                       forms.M_q_lumped.cwiseProduct(IN);
    double num = 0.0, den = 0.0;
    for (int i : geom.interior) {
        num += (lhs(i) + rhs(i)) * (lhs(i) + rhs(i));
        den += lhs(i) * lhs(i);
    }
    tf.interior_residual = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
    return tf;
}

AsymptoticDecomposition decompose_transform(const DiscreteGeometry& geom,
                                            const AssembledForms& forms,
                                            const CoefficientFields& coeffs, const PowerLaw& law,
                                            const TransformedField& tf, const Vector& phi0_v)
{
    if (!(tf.h > 0.0))
        throw ValidationError("BadDatum", "decomposition needs the monomial datum amplitude");
    AsymptoticDecomposition dec;
    const double m = law.exponent();

    dec.V0 = solve_elliptic(geom, forms.A, Vector::Zero(geom.n()), phi0_v);
    dec.c0 = beta_fn(tf.beta + 1.0, m + 1.0) * std::pow(tf.T0, tf.beta + m + 1.0);
    dec.R1 = tf.V - tf.h * dec.c0 * dec.V0;

    dec.cM_quad = correction_time_factor_M(tf.T0, tf.beta);
    dec.cN_quad = correction_time_factor_N(tf.T0, tf.beta);

    Vector v0_root(geom.n());
    for (int i = 0; i < geom.n(); ++i)
        v0_root(i) = law.phi_inverse(std::max(dec.V0(i), 0.0));
    const double hm = std::pow(tf.h, 1.0 / m);
    dec.M1_cal = hm * dec.cM_quad * coeffs.rho.cwiseProduct(v0_root);
    dec.N1_cal = hm * dec.cN_quad * coeffs.q.cwiseProduct(v0_root);

    // h-independent load of the first correction
    const Vector load = -(dec.M1_cal + dec.N1_cal) / hm;
    dec.V1 = solve_elliptic_field(geom, forms.A, forms.M_omega, load, Vector::Zero(geom.n()));

    dec.R2 = dec.R1 - hm * dec.V1;
    return dec;
}

} // namespace nlpm
