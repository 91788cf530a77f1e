#include "doctest.h"

#include <cmath>

#include "nlpm/dn_map.hpp"
#include "nlpm/errors.hpp"
#include "nlpm/extraction.hpp"
#include "nlpm/special_functions.hpp"
#include "nlpm/transform.hpp"

using namespace nlpm;

namespace {

struct Lab {
    DiscreteGeometry geom;
    KernelSpec kernel;
    AssembledForms forms;
    CoefficientFields coeffs;
    PowerLaw law;
};

Lab make_lab(int n = 65, double s = 0.5, double m = 2.0)
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
        rho(i) = 1.0 + 0.3 * x * x;
        q(i) = 0.5 * std::max(1.0 - x * x, 0.0);
    }
    auto forms = assemble_forms(geom, kernel, rho, q);
    auto coeffs = make_coefficients(geom, rho, q);
    return Lab{std::move(geom), std::move(kernel), std::move(forms), std::move(coeffs),
               PowerLaw(m)};
}

Vector bump(const DiscreteGeometry& geom, double c, double w)
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

TEST_CASE("beta admissibility")
{
    CHECK_NOTHROW(validate_beta(2.5, 2.0));
    CHECK_THROWS_WITH_AS(validate_beta(0.5, 2.0), doctest::Contains("InadmissibleBeta"),
                         ValidationError);
    // beta > 1 but below 1/(m-1)
    CHECK_THROWS_WITH_AS(validate_beta(1.5, 1.3), doctest::Contains("beta > 1/(m-1)"),
                         ValidationError);
    CHECK(default_beta(2.0) == doctest::Approx(2.5));
    CHECK(default_beta(1.2) == doctest::Approx(6.5)); // 1/(m-1) + 1.5 = 6.5
}

TEST_CASE("transform of a synthetic monomial field hits the Beta closed form")
{
    auto lab = make_lab();
    const double T0 = 0.5, beta = 2.5, m = 2.0;
    const int steps = 128;

    // v(x,t) = t^m g(x) -> u = Phi^{-1}(v); V = B(beta+1, m+1) T0^{beta+m+1} g
    SpaceTimeField run;
    run.dt = T0 / steps;
    run.values = Matrix::Zero(steps + 1, lab.geom.n());
    Vector g(lab.geom.n());
    for (int i = 0; i < lab.geom.n(); ++i)
        g(i) = 1.0 + 0.5 * std::sin(0.7 * lab.geom.nodes(i));
    for (int k = 0; k <= steps; ++k) {
        const double t = k * run.dt;
        for (int i = 0; i < lab.geom.n(); ++i)
            run.values(k, i) = lab.law.phi_inverse(std::pow(t, m) * g(i));
    }
    ExteriorDatum datum = ExteriorDatum::zero(lab.geom, T0);
    datum.h = 1.0;
    const auto tf = time_integral_transform(lab.geom, lab.forms, lab.coeffs, lab.law, run,
                                            datum, T0, beta);
    const double factor = beta_fn(beta + 1.0, m + 1.0) * std::pow(T0, beta + m + 1.0);
    for (int i = 0; i < lab.geom.n(); ++i)
        CHECK(std::fabs(tf.V(i) - factor * g(i)) <= 1e-6 * std::fabs(factor * g(i)));

    // zero run maps to zero
    SpaceTimeField zrun = run;
    zrun.values.setZero();
    const auto ztf = time_integral_transform(lab.geom, lab.forms, lab.coeffs, lab.law, zrun,
                                             datum, T0, beta);
    CHECK(ztf.V.cwiseAbs().maxCoeff() == 0.0);
    CHECK(ztf.M_cal.cwiseAbs().maxCoeff() == 0.0);
    CHECK(ztf.N_cal.cwiseAbs().maxCoeff() == 0.0);

    // inadmissible beta names the constraint
    CHECK_THROWS_WITH_AS(time_integral_transform(lab.geom, lab.forms, lab.coeffs, lab.law, run,
                                                 datum, T0, 0.5),
                         doctest::Contains("InadmissibleBeta"), ValidationError);
}

TEST_CASE("transform of a solved run: exterior value, interior residual, signs, barrier")
{
    auto lab = make_lab();
    const double T0 = 0.5, beta = 2.5, h = 1000.0;
    const Vector phi0 = bump(lab.geom, 2.0, 0.5);
    const auto datum = ExteriorDatum::v_monomial(lab.geom, lab.law, phi0, h, T0);
    ParabolicOptions opts;
    opts.n_steps = 256;
    opts.eps_k_max = 12;
    const auto run = solve_parabolic_limit(lab.geom, lab.forms, lab.coeffs, lab.law, datum,
                                           Vector::Zero(lab.geom.n()), opts);
    const auto tf = time_integral_transform(lab.geom, lab.forms, lab.coeffs, lab.law, run,
                                            datum, T0, beta);

    // exterior rows carry h B(beta+1, m+1) T0^{beta+m+1} phi0
    const double factor = h * beta_fn(beta + 1.0, 3.0) * std::pow(T0, beta + 3.0);
    for (int j : lab.geom.exterior)
        CHECK(std::fabs(tf.V(j) - factor * phi0(j)) <= 1e-6 * std::max(1.0, factor * phi0(j)));

    // weak interior residual small (time quadrature dominates)
    CHECK(tf.interior_residual <= 1e-2);

    // source fields are nonnegative
    CHECK(tf.M_cal.minCoeff() >= 0.0);
    CHECK(tf.N_cal.minCoeff() >= 0.0);

    const auto dec = decompose_transform(lab.geom, lab.forms, lab.coeffs, lab.law, tf, phi0);

    // decomposition identities hold exactly by construction
    const Vector id1 = tf.V - h * dec.c0 * dec.V0 - dec.R1;
    const Vector id2 =
        tf.V - h * dec.c0 * dec.V0 - std::pow(h, 0.5) * dec.V1 - dec.R2;
    (void)0;
    const double scale = tf.V.cwiseAbs().maxCoeff();
    CHECK(id1.cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK(id2.cwiseAbs().maxCoeff() <= 1e-12 * scale);

    // first-correction sources dominate the exact ones (v <= v0 barrier)
    CHECK((dec.M1_cal - tf.M_cal).minCoeff() >= -1e-6 * dec.M1_cal.maxCoeff());
    CHECK((dec.N1_cal - tf.N_cal).minCoeff() >= -1e-6 * std::max(1e-30, dec.N1_cal.maxCoeff()));

    // v stays below the barrier h t^m V0
    const auto v = run.to_v(lab.law);
    double worst = 0.0;
    for (int k = 0; k <= run.n_steps(); ++k) {
        const double t = run.time(k);
        for (int i : lab.geom.interior)
            worst = std::max(worst, v.values(k, i) - h * std::pow(t, 2.0) * dec.V0(i));
    }
    CHECK(worst <= 1e-4 * v.values.maxCoeff());

    // quadrature-computed time factors match their Beta-identity values
    CHECK(dec.cM_quad == doctest::Approx(std::pow(T0, beta + 1.0) / (beta + 1.0)).epsilon(1e-8));
    CHECK(dec.cN_quad ==
          doctest::Approx(std::pow(T0, beta + 2.0) / ((beta + 1.0) * (beta + 2.0))).epsilon(1e-8));
}

TEST_CASE("dn pairings: zero data, transferred-map consistency, bilinearity, self-adjointness")
{
    auto lab = make_lab();
    const double T0 = 0.5, h = 10.0;
    const double beta = default_beta(2.0);
    ParabolicOptions opts;
    opts.n_steps = 64;
    opts.eps_k_max = 10;

    const auto cat = TestFunctionCatalog::hats(lab.geom, 2.0);
    REQUIRE(!cat.profiles.empty());
    const Vector& w = cat.profiles[cat.profiles.size() / 2];

    // zero datum -> zero pairing
    const auto zdatum = ExteriorDatum::zero(lab.geom, T0);
    const RegularizedPowerLaw reg(2.0, 1.0 / 64.0);
    const auto zrun = solve_parabolic(lab.geom, lab.forms, lab.coeffs, reg, zdatum,
                                      Vector::Zero(lab.geom.n()), opts);
    CHECK(dn_pairing(zrun, lab.forms, lab.law, w, dn_time_weight(h, T0, beta), T0) == 0.0);

    const Vector phi0 = bump(lab.geom, 2.0, 0.5);
    const auto datum = ExteriorDatum::v_monomial(lab.geom, lab.law, phi0, h, T0);
    const auto run = solve_parabolic_limit(lab.geom, lab.forms, lab.coeffs, lab.law, datum,
                                           Vector::Zero(lab.geom.n()), opts);

    // relation between the two maps: pairing of u equals pairing of v = Phi(u)
    const auto vrun = run.to_v(lab.law);
    const double p_u = dn_pairing(run, lab.forms, lab.law, w, dn_time_weight(h, T0, beta), T0);
    const double p_v = dn_pairing_v(vrun, lab.forms, w, dn_time_weight(h, T0, beta), T0);
    CHECK(std::fabs(p_u - p_v) <= 1e-10 * std::fabs(p_u));

    // bilinearity in the test function
    const double p_2w =
        dn_pairing(run, lab.forms, lab.law, (2.0 * w).eval(), dn_time_weight(h, T0, beta), T0);
    CHECK(std::fabs(p_2w - 2.0 * p_u) <= 1e-12 * std::fabs(p_2w));

    // linear reference is self-adjoint under swapping data and test profiles
    const Vector wfull = w; // hat in W2; phi0 lives in W1
    const double r12 = linear_dn_reference(lab.geom, lab.forms.A, phi0, wfull);
    const double r21 = linear_dn_reference(lab.geom, lab.forms.A, wfull, phi0);
    CHECK(std::fabs(r12 - r21) <= 1e-12 * std::fabs(r12));

    // conductivity kernel with gamma = 1 gives the Laplacian reference
    const auto K1 = KernelSpec::fractional_conductivity(
        1, 0.5, [](double) { return 1.0; }, lab.geom.support_lo(), lab.geom.support_hi());
    const Matrix A1 = assemble_stiffness(lab.geom, K1);
    CHECK(std::fabs(linear_dn_reference(lab.geom, A1, phi0, wfull) - r12) <=
          1e-12 * std::fabs(r12));
}

TEST_CASE("dn sweep: determinism, monotonicity in h, noise keyed by seed")
{
    auto lab = make_lab(49);
    SweepScenario sc;
    sc.geom = &lab.geom;
    sc.forms = &lab.forms;
    sc.coeffs = &lab.coeffs;
    sc.m = 2.0;
    sc.s = 0.5;
    sc.solver.n_steps = 32;
    sc.solver.eps_k_max = 9;
    const auto cat = TestFunctionCatalog::hats_at(lab.geom, 2.0, {2.0, 2.5});
    const std::vector<Vector> data = {bump(lab.geom, 2.0, 0.5)};
    const std::vector<double> hs = {10.0, 100.0};
    const std::vector<double> T0s = {0.5, 0.25};

    const auto rec1 = dn_sweep(sc, data, hs, T0s, cat);
    const auto rec2 = dn_sweep(sc, data, hs, T0s, cat);
    REQUIRE(rec1.size() == rec2.size());
    for (size_t i = 0; i < rec1.size(); ++i)
        CHECK(rec1[i].pairing == rec2[i].pairing); // bit identical

    sc.threads = 2;
    const auto rec3 = dn_sweep(sc, data, hs, T0s, cat);
    for (size_t i = 0; i < rec1.size(); ++i)
        CHECK(rec1[i].pairing == rec3[i].pairing); // threading cannot change values

    // ordered data produce an ordered (sign-consistent, growing) response
    CHECK(dn_response_monotone(rec1));

    // noise: seeded, reproducible, different seeds differ
    sc.threads = 1;
    sc.noise_sigma = 0.01;
    sc.seed = 7;
    const auto noisy1 = dn_sweep(sc, data, hs, T0s, cat);
    const auto noisy2 = dn_sweep(sc, data, hs, T0s, cat);
    sc.seed = 8;
    const auto noisy3 = dn_sweep(sc, data, hs, T0s, cat);
    bool any_diff = false;
    for (size_t i = 0; i < noisy1.size(); ++i) {
        CHECK(noisy1[i].pairing == noisy2[i].pairing);
        any_diff = any_diff || noisy1[i].pairing != noisy3[i].pairing;
        CHECK(noisy1[i].pairing != rec1[i].pairing);
    }
    CHECK(any_diff);
}

TEST_CASE("h-expansion fit: exact recovery and rank deficiency")
{
    const double m = 2.0;
    const std::vector<double> hs = {1e2, 1e3, 1e4};
    std::vector<double> values;
    const double a = 3.7, b = -1.3;
    for (double h : hs)
        values.push_back(a + b * std::pow(h, 1.0 / m - 1.0));
    HExpansionFit fit;
    const double lead = leading_order_extract(hs, values, m, 1.0, false, &fit);
    CHECK(lead == doctest::Approx(a).epsilon(1e-10));
    CHECK(correction_extract(hs, values, m, false) == doctest::Approx(b).epsilon(1e-10));
    CHECK(fit.residual <= 1e-12 * std::fabs(a));

    // amplitudes too close: basis columns collinear
    const std::vector<double> bad = {100.0, 100.0 + 1e-9, 100.0 + 2e-9};
    CHECK_THROWS_WITH_AS(fit_h_expansion(bad, values, m, false),
                         doctest::Contains("RankDeficientFit"), ValidationError);
}
