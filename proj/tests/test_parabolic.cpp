#include "doctest.h"

#include <cmath>
#include <random>

#include "nlpm/elliptic.hpp"
#include "nlpm/errors.hpp"
#include "nlpm/parabolic.hpp"
#include "nlpm/solver_checks.hpp"

using namespace nlpm;

namespace {

struct Setup {
    DiscreteGeometry geom;
    KernelSpec kernel;
    AssembledForms forms;
    CoefficientFields coeffs;
    PowerLaw law;
};

Setup make_setup(double s = 0.5, double m = 2.0, int n = 65,
                 std::function<double(double)> rho_fn = nullptr,
                 std::function<double(double)> q_fn = nullptr)
{
    GeometryConfig cfg;
    cfg.R = 4.0;
    cfg.n_nodes = n;
    cfg.W1 = {1.25, 2.75};
    cfg.W2 = {1.75, 3.25};
    auto geom = build_geometry(cfg);
    auto kernel = KernelSpec::fractional_laplacian(1, s);
    Vector rho(geom.n()), q(geom.n());
    for (int i = 0; i < geom.n(); ++i) {
        const double x = geom.nodes(i);
        rho(i) = rho_fn ? rho_fn(x) : 1.0;
        q(i) = q_fn ? q_fn(x) : 0.0;
    }
    auto forms = assemble_forms(geom, kernel, rho, q);
    auto coeffs = make_coefficients(geom, rho, q);
    return Setup{std::move(geom), std::move(kernel), std::move(forms), std::move(coeffs),
                 PowerLaw(m)};
}

Vector bump_profile(const DiscreteGeometry& geom, double c, double w)
{
    Vector p = Vector::Zero(geom.n());
    for (int i : geom.w1_nodes) {
        const double y = (geom.nodes(i) - c) / w;
        if (std::fabs(y) < 1.0)
            p(i) = std::exp(-1.0 / (1.0 - y * y));
    }
    return p;
}

} // namespace

TEST_CASE("elliptic solve: constants, maximum principle, linearity")
{
    auto su = make_setup();
    const Vector zero = Vector::Zero(su.geom.n());

    // constant exterior data propagate as the constant
    Vector fc = Vector::Constant(su.geom.n(), 0.7);
    const Vector uc = solve_elliptic(su.geom, su.forms.A, zero, fc);
    for (int i : su.geom.interior)
        CHECK(std::fabs(uc(i) - 0.7) < 1e-2 * 0.7);

    // 0 <= f <= 1 keeps the solution in [0 - tol, 1 + tol]
    std::mt19937_64 rng(11u);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Vector f = Vector::Zero(su.geom.n());
    for (int j : su.geom.exterior)
        f(j) = dist(rng);
    const Vector u = solve_elliptic(su.geom, su.forms.A, zero, f);
    CHECK(u.minCoeff() > -1e-10);
    CHECK(u.maxCoeff() < 1.0 + 1e-10);

    // linearity
    const Vector u2 = solve_elliptic(su.geom, su.forms.A, zero, (2.0 * f).eval());
    CHECK((u2 - 2.0 * u).cwiseAbs().maxCoeff() <= 1e-10 * u.cwiseAbs().maxCoeff());

    // residual of the interior rows
    CHECK(elliptic_residual(su.geom, su.forms.A, zero, u) < 1e-10);
}

TEST_CASE("parabolic: zero data stays exactly zero")
{
    auto su = make_setup();
    ParabolicOptions opts;
    opts.n_steps = 16;
    const auto datum = ExteriorDatum::zero(su.geom, 0.5);
    const RegularizedPowerLaw reg(2.0, 1.0 / 64.0);
    const auto run = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum,
                                     Vector::Zero(su.geom.n()), opts);
    CHECK(run.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parabolic: discrete maximum principle on randomized nonnegative data")
{
    std::mt19937_64 rng(2024u);
    std::uniform_real_distribution<double> amp(0.2, 1.0);
    std::uniform_real_distribution<double> cen(1.6, 2.4);
    for (int trial = 0; trial < 10; ++trial) {
        auto su = make_setup(0.5, 2.0, 49,
                             [](double x) { return 1.0 + 0.2 * std::cos(x); },
                             [](double x) { return 0.3 * (x < 1.0 && x > -1.0); });
        const double a = amp(rng);
        Vector prof = amp(rng) * bump_profile(su.geom, cen(rng), 0.3);
        const auto datum = ExteriorDatum::u_space(
            su.geom, prof, [a](double t) { return a * std::min(t / 0.05, 1.0); }, 0.4);
        ParabolicOptions opts;
        opts.n_steps = 32;
        const RegularizedPowerLaw reg(2.0, 1.0 / 128.0);
        const auto run = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum,
                                         Vector::Zero(su.geom.n()), opts);
        const double sup_data = datum.sup_over(0.4);
        CHECK(run.values.maxCoeff() <= sup_data + 1e-4);
        CHECK(run.values.minCoeff() >= -1e-6);
        CHECK(run.max_newton_residual <= 1e-9);
    }
}

TEST_CASE("parabolic: epsilon-continuation is Cauchy and the limit is nonnegative")
{
    auto su = make_setup();
    const Vector prof = bump_profile(su.geom, 2.0, 0.4);
    const auto datum = ExteriorDatum::v_monomial(su.geom, su.law, prof, 10.0, 0.5);
    ParabolicOptions opts;
    opts.n_steps = 32;
    opts.eps_k_min = 3;
    opts.eps_k_max = 10;
    const auto run = solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, datum,
                                           Vector::Zero(su.geom.n()), opts);
    REQUIRE(run.continuation_diffs.size() >= 3);
    const auto& d = run.continuation_diffs;
    for (size_t i = d.size() - 3; i < d.size(); ++i)
        CHECK(d[i] < d[i - 1]);
    CHECK(run.values.minCoeff() >= -1e-6);
}

TEST_CASE("parabolic: monotone in the data amplitude (comparison principle)")
{
    auto su = make_setup();
    const Vector prof = bump_profile(su.geom, 2.0, 0.4);
    ParabolicOptions opts;
    opts.n_steps = 24;
    opts.eps_k_max = 9;
    const auto d1 = ExteriorDatum::v_monomial(su.geom, su.law, prof, 1.0, 0.5);
    const auto d2 = ExteriorDatum::v_monomial(su.geom, su.law, prof, 2.0, 0.5);
    const auto r1 = solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, d1,
                                          Vector::Zero(su.geom.n()), opts);
    const auto r2 = solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, d2,
                                          Vector::Zero(su.geom.n()), opts);
    CHECK(((r2.values - r1.values).minCoeff()) >= -1e-6);
}

TEST_CASE("parabolic: independent of the Newton warm start (uniqueness)")
{
    auto su = make_setup();
    const Vector prof = bump_profile(su.geom, 2.0, 0.4);
    const auto datum = ExteriorDatum::v_monomial(su.geom, su.law, prof, 5.0, 0.5);
    ParabolicOptions opts;
    opts.n_steps = 16;
    const RegularizedPowerLaw reg(2.0, 1.0 / 64.0);
    const auto r1 = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum,
                                    Vector::Zero(su.geom.n()), opts);
    // different initialization path: warm start from a run with perturbed data
    const auto datum_hi = ExteriorDatum::v_monomial(su.geom, su.law, prof, 7.0, 0.5);
    const auto warm = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum_hi,
                                      Vector::Zero(su.geom.n()), opts);
    const auto r2 = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum,
                                    Vector::Zero(su.geom.n()), opts, &warm);
    CHECK((r1.values - r2.values).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, r1.values.cwiseAbs().maxCoeff()));
}

TEST_CASE("parabolic: time-step refinement is Cauchy")
{
    auto su = make_setup(0.5, 2.0, 49);
    const Vector prof = bump_profile(su.geom, 2.0, 0.4);
    const RegularizedPowerLaw reg(2.0, 1.0 / 64.0);
    std::vector<Vector> finals;
    for (int steps : {16, 32, 64}) {
        ParabolicOptions opts;
        opts.n_steps = steps;
        const auto datum = ExteriorDatum::v_monomial(su.geom, su.law, prof, 5.0, 0.5);
        const auto run = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum,
                                         Vector::Zero(su.geom.n()), opts);
        finals.push_back(run.values.row(steps).transpose());
    }
    const double d01 = (finals[1] - finals[0]).norm() / finals[0].norm();
    const double d12 = (finals[2] - finals[1]).norm() / finals[1].norm();
    CHECK(d01 < 0.1);
    CHECK(d12 < d01);
}

TEST_CASE("parabolic: L2 energy bounded across spatial refinements")
{
    const Vector profs[3] = {};
    (void)profs;
    std::vector<double> sups;
    for (int n : {33, 49, 65}) {
        auto su = make_setup(0.5, 2.0, n);
        const Vector prof = bump_profile(su.geom, 2.0, 0.4);
        const auto datum = ExteriorDatum::v_monomial(su.geom, su.law, prof, 5.0, 0.5);
        ParabolicOptions opts;
        opts.n_steps = 24;
        const RegularizedPowerLaw reg(2.0, 1.0 / 64.0);
        const auto run = solve_parabolic(su.geom, su.forms, su.coeffs, reg, datum,
                                         Vector::Zero(su.geom.n()), opts);
        double sup = 0.0;
        for (int k = 0; k <= run.n_steps(); ++k) {
            const Vector uk = run.at(k);
            sup = std::max(sup, std::sqrt(uk.dot(su.forms.M_omega * uk)));
        }
        sups.push_back(sup);
    }
    for (double s : sups)
        CHECK(s <= 1.5 * sups[0]); // bounded uniformly in the refinement
}

TEST_CASE("comparison report: identical, ordered, and scaled data")
{
    auto su = make_setup();
    const Vector prof = bump_profile(su.geom, 2.0, 0.4);
    ParabolicOptions opts;
    opts.n_steps = 24;
    opts.eps_k_max = 9;
    const Vector u0 = Vector::Zero(su.geom.n());

    const auto d1 = ExteriorDatum::v_monomial(su.geom, su.law, prof, 2.0, 0.5);
    const auto r1 = solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, d1, u0, opts);

    // identical data: LHS = 0
    auto rep_same = check_comparison(su.geom, su.forms, 0.5, su.law, r1, r1, d1, d1, u0, u0);
    CHECK(rep_same.lhs == 0.0);

    // phi1 <= phi2: positive part of the difference stays at solver tolerance
    const auto d2 = ExteriorDatum::v_monomial(su.geom, su.law, prof, 3.0, 0.5);
    const auto r2 = solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, d2, u0, opts);
    auto rep_ord = check_comparison(su.geom, su.forms, 0.5, su.law, r1, r2, d1, d2, u0, u0);
    CHECK(rep_ord.lhs <= 1e-6);

    // delta-bump perturbations scale roughly linearly
    std::vector<double> lhs;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
        const auto dp =
            ExteriorDatum::v_monomial(su.geom, su.law, (1.0 + delta) * prof, 2.0, 0.5);
        const auto rp =
            solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, dp, u0, opts);
        auto rep = check_comparison(su.geom, su.forms, 0.5, su.law, rp, r1, dp, d1, u0, u0);
        CHECK(rep.pass);
        lhs.push_back(rep.lhs);
    }
    const double ratio1 = lhs[0] / lhs[1];
    const double ratio2 = lhs[1] / lhs[2];
    CHECK(ratio1 > 3.0);
    CHECK(ratio1 < 30.0);
    CHECK(ratio2 > 3.0);
    CHECK(ratio2 < 30.0);
}

TEST_CASE("stability report: zero for identical runs, bounded ratio, symmetric")
{
    auto su = make_setup(); // q = 0
    const Vector prof = bump_profile(su.geom, 2.0, 0.4);
    ParabolicOptions opts;
    opts.n_steps = 24;
    opts.eps_k_max = 9;
    const Vector u0 = Vector::Zero(su.geom.n());
    const auto d1 = ExteriorDatum::v_monomial(su.geom, su.law, prof, 2.0, 0.5);
    const auto r1 = solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, d1, u0, opts);

    auto rep0 = check_stability(su.geom, su.forms, su.law, r1, r1, d1, d1, u0, u0);
    CHECK(rep0.lhs_field == 0.0);
    CHECK(rep0.lhs_integral == 0.0);

    std::vector<double> ratios;
    for (double delta : {1e-1, 1e-2}) {
        const auto dp =
            ExteriorDatum::v_monomial(su.geom, su.law, (1.0 + delta) * prof, 2.0, 0.5);
        const auto rp =
            solve_parabolic_limit(su.geom, su.forms, su.coeffs, su.law, dp, u0, opts);
        auto rep = check_stability(su.geom, su.forms, su.law, rp, r1, dp, d1, u0, u0);
        ratios.push_back(rep.ratio);
        // swapped arguments give the same report
        auto rep_swap = check_stability(su.geom, su.forms, su.law, r1, rp, d1, dp, u0, u0);
        CHECK(rep.ratio == doctest::Approx(rep_swap.ratio).epsilon(1e-10));
    }
    CHECK(ratios[0] > 0.0);
    CHECK(ratios[1] > 0.0);
    const double spread = std::max(ratios[0], ratios[1]) / std::min(ratios[0], ratios[1]);
    CHECK(spread < 2.0);
}

TEST_CASE("datum validation")
{
    auto su = make_setup();
    Vector bad = Vector::Zero(su.geom.n());
    bad(su.geom.interior[0]) = 1.0; // support outside W1
    CHECK_THROWS_AS(
        ExteriorDatum::u_space(su.geom, bad, [](double t) { return t; }, 1.0),
        ValidationError);
    Vector ok = bump_profile(su.geom, 2.0, 0.4);
    CHECK_THROWS_AS(
        ExteriorDatum::u_space(su.geom, ok, [](double) { return 1.0; }, 1.0),
        ValidationError); // shape(0) != 0
    CHECK_THROWS_AS(make_coefficients(su.geom, Vector::Zero(su.geom.n()),
                                      Vector::Zero(su.geom.n())),
                    ValidationError);
}
