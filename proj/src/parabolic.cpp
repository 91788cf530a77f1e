#include "nlpm/parabolic.hpp"

#include <cmath>
#include <sstream>

#include "nlpm/errors.hpp"

namespace nlpm {

CoefficientFields make_coefficients(const DiscreteGeometry& geom, Vector rho, Vector q)
{
    if (rho.size() != geom.n() || q.size() != geom.n())
        throw ValidationError("BadCoefficients", "rho/q must be nodal fields on the full grid");
    if (!(rho.minCoeff() > 0.0))
        throw ValidationError("BadCoefficients", "rho must be uniformly elliptic (min > 0)");
    if (q.minCoeff() < 0.0)
        throw ValidationError("BadCoefficients", "q must be nonnegative");
    return CoefficientFields{std::move(rho), std::move(q)};
}

double ExteriorDatum::sup_over(double T_max) const
{
    double smax = 0.0;
    for (int k = 0; k <= 64; ++k)
        smax = std::max(smax, time_shape(T_max * k / 64.0));
    return smax * profile.maxCoeff();
}

ExteriorDatum ExteriorDatum::zero(const DiscreteGeometry& geom, double T)
{
    ExteriorDatum d;
    d.profile = Vector::Zero(geom.n());
    d.time_shape = [](double) { return 0.0; };
    d.T = T;
    return d;
}

namespace {

void validate_profile(const DiscreteGeometry& geom, const Vector& profile)
{
    if (profile.size() != geom.n())
        throw ValidationError("BadDatum", "profile must be a nodal field on the full grid");
    if (profile.minCoeff() < 0.0)
        throw ValidationError("BadDatum", "datum profile must be nonnegative");
    std::vector<bool> in_w1(geom.n(), false);
    for (int i : geom.w1_nodes)
        in_w1[i] = true;
    for (int i = 0; i < geom.n(); ++i)
        if (profile(i) != 0.0 && !in_w1[i])
            throw ValidationError("BadDatum", "datum profile must be supported inside W1");
}

} // namespace

ExteriorDatum ExteriorDatum::u_space(const DiscreteGeometry& geom, Vector profile,
                                     std::function<double(double)> shape, double T)
{
    validate_profile(geom, profile);
    if (std::fabs(shape(0.0)) > 0.0)
        throw ValidationError("BadDatum", "time shape must vanish at t = 0");
    ExteriorDatum d;
    d.profile = std::move(profile);
    d.time_shape = std::move(shape);
    d.T = T;
    return d;
}

ExteriorDatum ExteriorDatum::v_monomial(const DiscreteGeometry& geom, const PowerLaw& law,
                                        Vector phi0_v, double h, double T)
{
    validate_profile(geom, phi0_v);
    if (!(h > 0.0))
        throw ValidationError("BadDatum", "amplitude h must be positive");
    ExteriorDatum d;
    const double m = law.exponent();
    d.profile = phi0_v.unaryExpr([&](double v) { return law.phi_inverse(v); });
    const double amp = std::pow(h, 1.0 / m);
    d.time_shape = [amp](double t) { return amp * t; };
    d.T = T;
    d.h = h;
    d.m_exp = m;
    d.v_profile = std::move(phi0_v);
    return d;
}

SpaceTimeField SpaceTimeField::to_v(const PowerLaw& law) const
{
    SpaceTimeField v = *this;
    v.tag = Tag::v;
    for (int k = 0; k < values.rows(); ++k)
        for (int j = 0; j < values.cols(); ++j)
            v.values(k, j) = law.phi(values(k, j));
    return v;
}

namespace {

struct StepWorkspace {
    const DiscreteGeometry& geom;
    const AssembledForms& forms;
    const RegularizedPowerLaw& reg;
    double dt;
    std::vector<int> interior;

    Vector residual(const Vector& U, const Vector& U_prev) const
    {
        Vector phi(U.size());
        for (int i = 0; i < U.size(); ++i)
            phi(i) = reg.value(U(i));
        const Vector full = forms.M_rho_lumped.cwiseProduct(U - U_prev) / dt + forms.A * phi +
                            forms.M_q_lumped.cwiseProduct(U);
        Vector r(static_cast<int>(interior.size()));
        for (size_t a = 0; a < interior.size(); ++a)
            r(static_cast<int>(a)) = full(interior[a]);
        return r;
    }
};

} // namespace

SpaceTimeField solve_parabolic(const DiscreteGeometry& geom, const AssembledForms& forms,
                               const CoefficientFields& coeffs, const RegularizedPowerLaw& reg,
                               const ExteriorDatum& datum, const Vector& u0,
                               const ParabolicOptions& opts, const SpaceTimeField* warm_start)
{
    (void)coeffs; // mass matrices already carry rho and q
    if (opts.n_steps < 8)
        throw ValidationError("BadSolverOptions", "need at least 8 time steps");
    if (u0.size() != geom.n() || u0.minCoeff() < -1e-14)
        throw ValidationError("BadInitialData", "u0 must be a nonnegative nodal field");
    for (int j : geom.exterior)
        if (u0(j) != 0.0)
            throw ValidationError("BadInitialData", "u0 must be supported in omega");

    const int n = geom.n();
    const int ni = static_cast<int>(geom.interior.size());
    const double dt = datum.T / opts.n_steps;

    SpaceTimeField out;
    out.values = Matrix::Zero(opts.n_steps + 1, n);
    out.dt = dt;
    out.tag = SpaceTimeField::Tag::u;
    out.values.row(0) = u0.transpose();
    // exterior rows carry the datum at every step, including t = 0
    for (int j : geom.exterior)
        out.values(0, j) = datum.value(j, 0.0);

    StepWorkspace ws{geom, forms, reg, dt, geom.interior};

    Vector U_prev = out.values.row(0).transpose();
    for (int k = 1; k <= opts.n_steps; ++k) {
        const double t = k * dt;
        Vector U = U_prev;
        for (int j : geom.exterior)
            U(j) = datum.value(j, t);

        // scale of the balanced terms, for the relative residual target
        double scale = 1e-12;
        {
            Vector phi(n);
            for (int i = 0; i < n; ++i)
                phi(i) = reg.value(U(i));
            const Vector t1 = forms.M_rho_lumped.cwiseProduct(U - U_prev) / dt;
            const Vector t2 = forms.A * phi;
            const Vector t3 = forms.M_q_lumped.cwiseProduct(U);
            for (int a : geom.interior)
                scale = std::max(scale,
                                 std::fabs(t1(a)) + std::fabs(t2(a)) + std::fabs(t3(a)));
            const Vector mp = forms.M_rho_lumped.cwiseProduct(U_prev) / dt;
            for (int a : geom.interior)
                scale = std::max(scale, std::fabs(mp(a)));
        }

        // zero shortcut: stationary states stay put exactly
        Vector r = ws.residual(U, U_prev);
        double rnorm = r.norm();
        if (rnorm > opts.newton_tol * scale) {
            // degenerate-start guard away from the flat region of Phi_eps
            if (warm_start != nullptr) {
                U = warm_start->values.row(k).transpose();
                for (int j : geom.exterior)
                    U(j) = datum.value(j, t);
            } else {
                for (int i : geom.interior)
                    U(i) = std::max(U(i), 1e-8);
            }
            r = ws.residual(U, U_prev);
            rnorm = r.norm();

            bool converged = false;
            for (int it = 0; it < opts.newton_max_iter; ++it) {
                if (rnorm <= opts.newton_tol * scale) {
                    converged = true;
                    break;
                }
                // J = M_rho/dt + A diag(Phi_eps') + M_q on the interior block
                Matrix J(ni, ni);
                for (int b = 0; b < ni; ++b) {
                    const int jb = geom.interior[b];
                    const double dphi = reg.derivative(U(jb));
                    for (int a = 0; a < ni; ++a) {
                        const int ja = geom.interior[a];
                        J(a, b) = forms.A(ja, jb) * dphi;
                    }
                    J(b, b) += forms.M_rho_lumped(jb) / dt + forms.M_q_lumped(jb);
                }
                Eigen::PartialPivLU<Matrix> lu(J);
                const Vector delta = lu.solve(-r);
                if (!delta.allFinite())
                    throw SolverError("NewtonDivergence", "non-finite Newton step");

                double lambda = 1.0;
                bool accepted = false;
                while (lambda >= opts.damping_floor) {
                    Vector U_try = U;
                    for (int a = 0; a < ni; ++a)
                        U_try(geom.interior[a]) += lambda * delta(a);
                    const Vector r_try = ws.residual(U_try, U_prev);
                    const double rn_try = r_try.norm();
                    if (rn_try <= (1.0 - 1e-4 * lambda) * rnorm) {
                        U = U_try;
                        r = r_try;
                        rnorm = rn_try;
                        accepted = true;
                        break;
                    }
                    lambda *= 0.5;
                }
                if (!accepted) {
                    std::ostringstream oss;
                    oss << "no damped step decreased the residual at step " << k
                        << " (t=" << t << ", |r|=" << rnorm << ", scale=" << scale << ")";
                    throw SolverError("NewtonDivergence", oss.str());
                }
                out.max_newton_iters = std::max(out.max_newton_iters, it + 1);
            }
            if (!converged && rnorm > opts.newton_tol * scale) {
                std::ostringstream oss;
                oss << "Newton did not reach tolerance at step " << k << " (t=" << t
                    << ", |r|=" << rnorm << ", target=" << opts.newton_tol * scale << ")";
                throw SolverError("NewtonDivergence", oss.str());
            }
        }
        out.max_newton_residual = std::max(out.max_newton_residual, rnorm / scale);

        if (U.minCoeff() < -opts.overshoot_tol)
            out.overshoot_steps.push_back(k);

        out.values.row(k) = U.transpose();
        U_prev = U;
    }
    return out;
}

double space_time_l2_distance(const DiscreteGeometry& geom, const AssembledForms& forms,
                              const SpaceTimeField& a, const SpaceTimeField& b)
{
    (void)geom;
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
        throw ValidationError("GeometryMismatch", "fields live on different grids");
    double acc = 0.0;
    const int K = a.n_steps();
    for (int k = 0; k <= K; ++k) {
        const Vector d = (a.values.row(k) - b.values.row(k)).transpose();
        const double w = (k == 0 || k == K) ? 0.5 : 1.0;
        acc += w * a.dt * d.dot(forms.M_omega * d);
    }
    return std::sqrt(std::max(acc, 0.0));
}

double space_time_l2_norm(const DiscreteGeometry& geom, const AssembledForms& forms,
                          const SpaceTimeField& a)
{
    (void)geom;
    double acc = 0.0;
    const int K = a.n_steps();
    for (int k = 0; k <= K; ++k) {
        const Vector d = a.values.row(k).transpose();
        const double w = (k == 0 || k == K) ? 0.5 : 1.0;
        acc += w * a.dt * d.dot(forms.M_omega * d);
    }
    return std::sqrt(std::max(acc, 0.0));
}

SpaceTimeField solve_parabolic_limit(const DiscreteGeometry& geom, const AssembledForms& forms,
                                     const CoefficientFields& coeffs, const PowerLaw& law,
                                     const ExteriorDatum& datum, const Vector& u0,
                                     const ParabolicOptions& opts)
{
    SpaceTimeField current;
    std::vector<double> diffs;
    bool have_current = false;
    int non_decreasing = 0;
    for (int kk = opts.eps_k_min; kk <= opts.eps_k_max; ++kk) {
        const double eps = std::pow(2.0, -kk);
        const RegularizedPowerLaw reg(law.exponent(), eps);
        SpaceTimeField next = solve_parabolic(geom, forms, coeffs, reg, datum, u0, opts,
                                              have_current ? &current : nullptr);
        if (have_current) {
            const double d = space_time_l2_distance(geom, forms, next, current);
            const double scale = std::max(space_time_l2_norm(geom, forms, next), 1e-300);
            if (!diffs.empty() && d >= diffs.back() && d > opts.continuation_rtol * scale)
                ++non_decreasing;
            else
                non_decreasing = 0;
            diffs.push_back(d);
            if (non_decreasing >= 3)
                throw SolverError("ContinuationStall",
                                  "successive-epsilon differences stopped decreasing");
            if (d <= opts.continuation_rtol * scale) {
                current = std::move(next);
                break; // certified: further regularization is below tolerance
            }
        }
        current = std::move(next);
        have_current = true;
    }
    current.continuation_diffs = diffs;
    return current;
}

} // namespace nlpm
