#include "nlpm/extraction.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "nlpm/errors.hpp"

namespace nlpm {

HExpansionFit fit_h_expansion(const std::vector<double>& h_list,
                              const std::vector<double>& values, double m, bool third_term)
{
    const int rows = static_cast<int>(h_list.size());
    const int cols = third_term ? 3 : 2;
    if (rows < cols || values.size() != h_list.size())
        throw ValidationError("RankDeficientFit", "need at least as many amplitudes as basis terms");
    Matrix X(rows, cols);
    Vector y(rows);
    for (int i = 0; i < rows; ++i) {
        const double h = h_list[i];
        const double w = 1.0 / h;
        X(i, 0) = w;
        X(i, 1) = w * std::pow(h, 1.0 / m - 1.0);
        if (third_term)
            X(i, 2) = w * std::pow(h, 1.0 / (m * m) - 1.0);
        y(i) = w * values[i];
    }
    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(cols - 1);
    if (!(smin > 1e-10 * smax))
        throw ValidationError("RankDeficientFit",
                              "amplitudes too close to resolve the expansion basis");
    const Vector c = svd.solve(y);
    HExpansionFit fit;
    fit.coeffs.assign(c.data(), c.data() + cols);
    fit.residual = (X * c - y).norm() / std::sqrt(static_cast<double>(rows));
    fit.condition = smax / smin;
    return fit;
}

double leading_order_extract(const std::vector<double>& h_list,
                             const std::vector<double>& pairings, double m, double c0,
                             bool third_term, HExpansionFit* fit_out)
{
    const HExpansionFit fit = fit_h_expansion(h_list, pairings, m, third_term);
    if (fit_out)
        *fit_out = fit;
    return fit.coeffs[0] / c0;
}

double correction_extract(const std::vector<double>& h_list,
                          const std::vector<double>& pairings, double m, bool third_term,
                          HExpansionFit* fit_out)
{
    const HExpansionFit fit = fit_h_expansion(h_list, pairings, m, third_term);
    if (fit_out)
        *fit_out = fit;
    return fit.coeffs[1];
}

namespace {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

RemainderRateReport verify_remainder_rates(const SweepScenario& scenario, const Vector& phi0_v,
                                           const std::vector<double>& h_list, double T0,
                                           double beta)
{
    if (h_list.size() < 4 || h_list.back() / h_list.front() < 100.0)
        throw ValidationError("BadAmplitudeList",
                              "need at least 4 amplitudes spanning two decades");
    const auto& geom = *scenario.geom;
    const auto& forms = *scenario.forms;
    const PowerLaw law(scenario.m);

    RemainderRateReport rep;
    rep.h_list = h_list;
    for (double h : h_list) {
        const auto datum = ExteriorDatum::v_monomial(geom, law, phi0_v, h, T0);
        const auto run = solve_parabolic_limit(geom, forms, *scenario.coeffs, law, datum,
                                               Vector::Zero(geom.n()), scenario.solver);
        const auto tf =
            time_integral_transform(geom, forms, *scenario.coeffs, law, run, datum, T0, beta);
        const auto dec = decompose_transform(geom, forms, *scenario.coeffs, law, tf, phi0_v);
        rep.r1_norms.push_back(discrete_hs_norm(forms, dec.R1));
        rep.r2_norms.push_back(discrete_hs_norm(forms, dec.R2));
    }
    for (size_t i = 1; i < h_list.size(); ++i) {
        if (rep.r1_norms[i] < rep.r1_norms[i - 1] || rep.r2_norms[i] < rep.r2_norms[i - 1])
            rep.monotone = false;
    }
    rep.r1_slope = loglog_slope(rep.h_list, rep.r1_norms);
    rep.r2_slope = loglog_slope(rep.h_list, rep.r2_norms);
    return rep;
}

} // namespace nlpm
