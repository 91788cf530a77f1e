#pragma once

#include <cstdint>
#include <vector>

#include "nlpm/parabolic.hpp"

namespace nlpm {

// beta must satisfy beta > 1 and beta > 1/(m-1); throws ValidationError
// ("InadmissibleBeta") naming the violated constraint otherwise.
void validate_beta(double beta, double m);

// default: max(2, 1/(m-1) + 1/2 + 1) rounded to one decimal
double default_beta(double m);

// Spatial test profiles supported in W2 with the common temporal weight
// h^{-1} (T0 - t)^beta on [0, T0].
struct TestFunctionCatalog {
    std::vector<Vector> profiles; // nodal fields, hat support inside W2
    std::vector<int> nodes;       // node index per profile (hat catalogs)
    double beta = 2.5;

    // all hat functions on W2 nodes
    static TestFunctionCatalog hats(const DiscreteGeometry& geom, double m);
    // hats at the nodes nearest to the given positions (must lie in W2)
    static TestFunctionCatalog hats_at(const DiscreteGeometry& geom, double m,
                                       const std::vector<double>& positions);
};

struct DNRecord {
    int datum_id = 0;
    int test_id = 0;
    double h = 0.0;
    double T0 = 0.0;
    double pairing = 0.0;
    // discretization metadata
    double beta = 0.0;
    double m = 0.0;
    double s = 0.0;
    double R = 0.0;
    int n_nodes = 0;
    double dt = 0.0;
    double eps_min = 0.0;
};

// Pairing of a u-tagged run against psi(x,t) = time_weight(t) w(x) on [0, T0]:
// the trapezoid sum of time_weight(t_k) w' A Phi(u(t_k)). T0 must sit on the
// time grid.
double dn_pairing(const SpaceTimeField& run, const AssembledForms& forms, const PowerLaw& law,
                  const Vector& w, const std::function<double(double)>& time_weight, double T0);

// Same for a v-tagged run (transferred map): sums time_weight(t) w' A v(t).
double dn_pairing_v(const SpaceTimeField& run, const AssembledForms& forms, const Vector& w,
                    const std::function<double(double)>& time_weight, double T0);

// the canonical test weight h^{-1} (T0 - t)^beta
std::function<double(double)> dn_time_weight(double h, double T0, double beta);

struct SweepScenario {
    const DiscreteGeometry* geom = nullptr;
    const AssembledForms* forms = nullptr;
    const CoefficientFields* coeffs = nullptr;
    double m = 2.0;
    double s = 0.5;
    ParabolicOptions solver;
    double noise_sigma = 0.0; // relative Gaussian perturbation of pairings
    std::uint64_t seed = 0;
    int threads = 1;
};

// One record per (datum, h, T0, test). Solves the nonlinear problem once per
// (datum, h) over [0, max T0]; records are deterministic for a fixed scenario
// (the noise stream is keyed per record, so threading cannot reorder it).
std::vector<DNRecord> dn_sweep(const SweepScenario& scenario,
                               const std::vector<Vector>& datum_profiles_v,
                               const std::vector<double>& h_list,
                               const std::vector<double>& T0_list,
                               const TestFunctionCatalog& catalog);

// <Lambda_K phi0, w> of the linear elliptic problem: solves L_K V0 = 0 in
// omega with exterior value phi0 and returns w' A V0.
double linear_dn_reference(const DiscreteGeometry& geom, const Matrix& A, const Vector& phi0,
                           const Vector& w);

// Monotone-data consequence of the comparison principle on the records: for
// each (datum, test, T0) group the unnormalized response h * pairing keeps a
// fixed sign and grows in magnitude with h (within tol * scale).
bool dn_response_monotone(const std::vector<DNRecord>& records, double tol = 1e-6);

} // namespace nlpm
