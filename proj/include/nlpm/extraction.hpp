#pragma once

#include <vector>

#include "nlpm/dn_map.hpp"
#include "nlpm/transform.hpp"

namespace nlpm {

// Weighted least-squares fit of pairing(h) in the basis
//   {1, h^{1/m-1}} (+ optionally h^{1/m^2-1}),
// weights 1/h to de-emphasize the largest amplitudes. Throws
// ValidationError("RankDeficientFit") when the h values cannot resolve the
// basis.
struct HExpansionFit {
    std::vector<double> coeffs; // constant, correction (, second correction)
    double residual = 0.0;      // weighted rms residual
    double condition = 0.0;     // of the weighted design
};

HExpansionFit fit_h_expansion(const std::vector<double>& h_list,
                              const std::vector<double>& values, double m, bool third_term);

// constant term / c0 -> estimate of <Lambda_K phi0, w>
double leading_order_extract(const std::vector<double>& h_list,
                             const std::vector<double>& pairings, double m, double c0,
                             bool third_term, HExpansionFit* fit_out = nullptr);

// coefficient of h^{1/m-1} -> estimate of B_K(V1, w)
double correction_extract(const std::vector<double>& h_list,
                          const std::vector<double>& pairings, double m, bool third_term,
                          HExpansionFit* fit_out = nullptr);

struct RemainderRateReport {
    std::vector<double> h_list;
    std::vector<double> r1_norms; // discrete H^s norms
    std::vector<double> r2_norms;
    double r1_slope = 0.0; // log-log slopes
    double r2_slope = 0.0;
    bool monotone = true; // norms increase with h (discretization floor not hit)
};

// Runs the forward problem per amplitude, transforms, decomposes and measures
// the remainder norms against the expected rates h^{1/m} and h^{1/m^2}.
RemainderRateReport verify_remainder_rates(const SweepScenario& scenario, const Vector& phi0_v,
                                           const std::vector<double>& h_list, double T0,
                                           double beta);

} // namespace nlpm
