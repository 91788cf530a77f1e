#include "nlpm/dn_map.hpp"

#include <cmath>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "nlpm/elliptic.hpp"
#include "nlpm/errors.hpp"

namespace nlpm {

void validate_beta(double beta, double m)
{
    if (!(beta > 1.0)) {
        std::ostringstream oss;
        oss << "beta = " << beta << " violates beta > 1";
        throw ValidationError("InadmissibleBeta", oss.str());
    }
    const double bound = 1.0 / (m - 1.0);
    if (!(beta > bound)) {
        std::ostringstream oss;
        oss << "beta = " << beta << " violates beta > 1/(m-1) = " << bound;
        throw ValidationError("InadmissibleBeta", oss.str());
    }
}

double default_beta(double m)
{
    const double b = std::max(2.0, 1.0 / (m - 1.0) + 0.5 + 1.0);
    return std::round(b * 10.0) / 10.0;
}

TestFunctionCatalog TestFunctionCatalog::hats(const DiscreteGeometry& geom, double m)
{
    TestFunctionCatalog cat;
    cat.beta = default_beta(m);
    for (int i : geom.w2_nodes) {
        Vector w = Vector::Zero(geom.n());
        w(i) = 1.0;
        cat.profiles.push_back(std::move(w));
        cat.nodes.push_back(i);
    }
    if (cat.profiles.empty())
        throw ValidationError("WindowEmpty", "W2 carries no hat function on this grid");
    return cat;
}

TestFunctionCatalog TestFunctionCatalog::hats_at(const DiscreteGeometry& geom, double m,
                                                 const std::vector<double>& positions)
{
    TestFunctionCatalog cat;
    cat.beta = default_beta(m);
    for (double x : positions) {
        int best = -1;
        double dist = 1e300;
        for (int i : geom.w2_nodes) {
            const double d = std::fabs(geom.nodes(i) - x);
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        if (best < 0)
            throw ValidationError("WindowEmpty", "W2 carries no hat function on this grid");
        Vector w = Vector::Zero(geom.n());
        w(best) = 1.0;
        cat.profiles.push_back(std::move(w));
        cat.nodes.push_back(best);
    }
    return cat;
}

namespace {

int grid_step_of(double T0, double dt)
{
    const double k = T0 / dt;
    const int ki = static_cast<int>(std::round(k));
    if (std::fabs(k - ki) > 1e-9 * std::max(1.0, k))
        throw ValidationError("GridMisaligned", "T0 must be a multiple of the time step");
    return ki;
}

} // namespace

double dn_pairing(const SpaceTimeField& run, const AssembledForms& forms, const PowerLaw& law,
                  const Vector& w, const std::function<double(double)>& time_weight, double T0)
{
    if (w.size() != run.values.cols())
        throw ValidationError("GeometryMismatch", "test profile does not match the run grid");
    const int kT = grid_step_of(T0, run.dt);
    if (kT > run.n_steps())
        throw ValidationError("BadHorizon", "T0 exceeds the run horizon");
    const Vector wA = forms.A * w; // A is symmetric: psi' A v = (A psi) . v
    double acc = 0.0;
    for (int k = 0; k <= kT; ++k) {
        double dot = 0.0;
        for (int j = 0; j < w.size(); ++j)
            dot += wA(j) * law.phi(run.values(k, j));
        const double trap = (k == 0 || k == kT) ? 0.5 : 1.0;
        acc += trap * run.dt * time_weight(run.time(k)) * dot;
    }
    return acc;
}

double dn_pairing_v(const SpaceTimeField& run, const AssembledForms& forms, const Vector& w,
                    const std::function<double(double)>& time_weight, double T0)
{
    if (w.size() != run.values.cols())
        throw ValidationError("GeometryMismatch", "test profile does not match the run grid");
    const int kT = grid_step_of(T0, run.dt);
    if (kT > run.n_steps())
        throw ValidationError("BadHorizon", "T0 exceeds the run horizon");
    const Vector wA = forms.A * w;
    double acc = 0.0;
    for (int k = 0; k <= kT; ++k) {
        const double dot = wA.dot(run.at(k));
        const double trap = (k == 0 || k == kT) ? 0.5 : 1.0;
        acc += trap * run.dt * time_weight(run.time(k)) * dot;
    }
    return acc;
}

std::function<double(double)> dn_time_weight(double h, double T0, double beta)
{
    return [h, T0, beta](double t) {
        const double r = T0 - t;
        return r > 0.0 ? std::pow(r, beta) / h : 0.0;
    };
}

std::vector<DNRecord> dn_sweep(const SweepScenario& scenario,
                               const std::vector<Vector>& datum_profiles_v,
                               const std::vector<double>& h_list,
                               const std::vector<double>& T0_list,
                               const TestFunctionCatalog& catalog)
{
    const auto& geom = *scenario.geom;
    const auto& forms = *scenario.forms;
    const PowerLaw law(scenario.m);
    validate_beta(catalog.beta, scenario.m);
    for (double h : h_list)
        if (!(h > 1.0))
            throw ValidationError("BadAmplitude", "data amplitudes must satisfy h > 1");
    double T_max = 0.0;
    for (double T0 : T0_list)
        T_max = std::max(T_max, T0);

    struct Job {
        int datum_id;
        int h_id;
    };
    std::vector<Job> jobs;
    for (int i = 0; i < static_cast<int>(datum_profiles_v.size()); ++i)
        for (int a = 0; a < static_cast<int>(h_list.size()); ++a)
            jobs.push_back({i, a});

    auto run_job = [&](const Job& job) {
        const auto datum = ExteriorDatum::v_monomial(geom, law, datum_profiles_v[job.datum_id],
                                                     h_list[job.h_id], T_max);
        auto opts = scenario.solver;
        const auto run = solve_parabolic_limit(geom, forms, *scenario.coeffs, law, datum,
                                               Vector::Zero(geom.n()), opts);
        std::vector<DNRecord> recs;
        for (int b = 0; b < static_cast<int>(T0_list.size()); ++b) {
            const double T0 = T0_list[b];
            for (int j = 0; j < static_cast<int>(catalog.profiles.size()); ++j) {
                DNRecord rec;
                rec.datum_id = job.datum_id;
                rec.test_id = j;
                rec.h = h_list[job.h_id];
                rec.T0 = T0;
                rec.pairing = dn_pairing(run, forms, law, catalog.profiles[j],
                                         dn_time_weight(rec.h, T0, catalog.beta), T0);
                if (scenario.noise_sigma > 0.0) {
                    // per-record stream: threading cannot change the draw
                    std::seed_seq seq{scenario.seed, static_cast<std::uint64_t>(job.datum_id),
                                      static_cast<std::uint64_t>(job.h_id),
                                      static_cast<std::uint64_t>(b),
                                      static_cast<std::uint64_t>(j)};
                    std::mt19937_64 rng(seq);
                    std::normal_distribution<double> g;
                    rec.pairing += scenario.noise_sigma * std::fabs(rec.pairing) * g(rng);
                }
                rec.beta = catalog.beta;
                rec.m = scenario.m;
                rec.s = scenario.s;
                rec.R = geom.config.R;
                rec.n_nodes = geom.n();
                rec.dt = run.dt;
                rec.eps_min = std::pow(2.0, -opts.eps_k_max);
                recs.push_back(rec);
            }
        }
        return recs;
    };

    std::vector<std::vector<DNRecord>> per_job(jobs.size());
    if (scenario.threads > 1) {
        // batches of at most `threads` concurrent solves; results keyed by
        // job index, so the assembled record order is scheduling-independent
        const size_t stride = static_cast<size_t>(std::max(1, scenario.threads));
        for (size_t base = 0; base < jobs.size(); base += stride) {
            const size_t hi = std::min(jobs.size(), base + stride);
            std::vector<std::future<std::vector<DNRecord>>> futures;
            for (size_t k = base; k < hi; ++k)
                futures.push_back(std::async(std::launch::async, run_job, jobs[k]));
            for (size_t k = base; k < hi; ++k)
                per_job[k] = futures[k - base].get();
        }
    } else {
        for (size_t k = 0; k < jobs.size(); ++k)
            per_job[k] = run_job(jobs[k]);
    }

    std::vector<DNRecord> records;
    for (const auto& part : per_job)
        records.insert(records.end(), part.begin(), part.end());
    return records;
}

double linear_dn_reference(const DiscreteGeometry& geom, const Matrix& A, const Vector& phi0,
                           const Vector& w)
{
    const Vector V0 = solve_elliptic(geom, A, Vector::Zero(geom.n()), phi0);
    return w.dot(A * V0);
}

bool dn_response_monotone(const std::vector<DNRecord>& records, double tol)
{
    std::map<std::tuple<int, int, double>, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : records)
        groups[{r.datum_id, r.test_id, r.T0}].push_back({r.h, r.h * r.pairing});
    for (auto& [key, seq] : groups) {
        std::sort(seq.begin(), seq.end());
        double scale = 0.0;
        for (const auto& [h, hp] : seq)
            scale = std::max(scale, std::fabs(hp));
        if (scale == 0.0)
            continue;
        const double sign = seq.back().second >= 0.0 ? 1.0 : -1.0;
        double prev = -1e300;
        for (const auto& [h, hp] : seq) {
            const double v = sign * hp;
            if (v < -tol * scale)
                return false; // sign flip beyond tolerance
            if (v < prev - tol * scale)
                return false; // magnitude dropped
            prev = v;
        }
    }
    return true;
}

} // namespace nlpm
