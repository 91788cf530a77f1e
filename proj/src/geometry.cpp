#include "nlpm/geometry.hpp"

#include <cmath>

#include "nlpm/errors.hpp"

namespace nlpm {

double DiscreteGeometry::hat(int i, double x) const
{
    const double r = 1.0 - std::fabs(x - nodes(i)) / dx;
    return r > 0.0 ? r : 0.0;
}

Vector DiscreteGeometry::omega_weights() const
{
    Vector w = Vector::Zero(n());
    const double lo = config.omega.lo, hi = config.omega.hi;
    for (int i = 0; i < n(); ++i) {
        const double x = nodes(i);
        if (x < lo - 1e-12 || x > hi + 1e-12)
            continue;
        const bool at_lo = std::fabs(x - lo) < 1e-12;
        const bool at_hi = std::fabs(x - hi) < 1e-12;
        w(i) = (at_lo || at_hi) ? 0.5 * dx : dx;
    }
    return w;
}

Vector DiscreteGeometry::restrict_interior(const Vector& full) const
{
    Vector out(static_cast<int>(interior.size()));
    for (size_t k = 0; k < interior.size(); ++k)
        out(static_cast<int>(k)) = full(interior[k]);
    return out;
}

Vector DiscreteGeometry::scatter_interior(const Vector& part) const
{
    Vector out = Vector::Zero(n());
    for (size_t k = 0; k < interior.size(); ++k)
        out(interior[k]) = part(static_cast<int>(k));
    return out;
}

namespace {

void validate_window(const char* name, const Interval& w, const GeometryConfig& g)
{
    if (!(w.lo < w.hi))
        throw ValidationError("BadGeometry", std::string(name) + " is not a proper interval");
    const bool right = w.lo > g.omega.hi && w.hi <= g.R;
    const bool left = w.hi < g.omega.lo && w.lo >= -g.R;
    if (!right && !left) {
        if (w.lo <= g.omega.hi && w.hi >= g.omega.lo)
            throw ValidationError("WindowTouchesDomain",
                                  std::string(name) + " must keep a positive distance to the domain closure");
        throw ValidationError("WindowOutsideGrid",
                              std::string(name) + " must lie inside (omega_hi, R) or (-R, omega_lo)");
    }
}

} // namespace

DiscreteGeometry build_geometry(const GeometryConfig& config)
{
    if (!(config.R > 1.0))
        throw ValidationError("BadGeometry", "truncation radius must exceed 1");
    if (config.n_nodes < 9)
        throw ValidationError("BadGeometry", "need at least 9 nodes");
    if (!(config.omega.lo < config.omega.hi) || config.omega.lo <= -config.R ||
        config.omega.hi >= config.R)
        throw ValidationError("BadGeometry", "omega must be strictly inside (-R, R)");

    validate_window("W1", config.W1, config);
    validate_window("W2", config.W2, config);
    if (!(std::max(config.W1.lo, config.W2.lo) < std::min(config.W1.hi, config.W2.hi)))
        throw ValidationError("DisjointWindows", "W1 and W2 must overlap");

    DiscreteGeometry geom;
    geom.config = config;
    geom.nodes = Vector::LinSpaced(config.n_nodes, -config.R, config.R);
    geom.dx = 2.0 * config.R / (config.n_nodes - 1);

    // omega endpoints must sit on grid nodes, otherwise the interior mask and
    // the omega mass matrices are ill-defined
    for (double end : {config.omega.lo, config.omega.hi}) {
        const double k = (end + config.R) / geom.dx;
        if (std::fabs(k - std::round(k)) > 1e-9)
            throw ValidationError("OmegaOffGrid", "omega endpoints must coincide with grid nodes");
    }

    geom.is_interior.assign(config.n_nodes, false);
    for (int i = 0; i < config.n_nodes; ++i) {
        const double x = geom.nodes(i);
        if (x >= config.omega.lo - 1e-12 && x <= config.omega.hi + 1e-12) {
            geom.interior.push_back(i);
            geom.is_interior[i] = true;
        } else {
            geom.exterior.push_back(i);
        }
        // a node belongs to a window when the whole hat support fits in it,
        // the discrete counterpart of compact support inside the open window
        const double tol = 1e-12;
        if (x - geom.dx >= config.W1.lo - tol && x + geom.dx <= config.W1.hi + tol)
            geom.w1_nodes.push_back(i);
        if (x - geom.dx >= config.W2.lo - tol && x + geom.dx <= config.W2.hi + tol)
            geom.w2_nodes.push_back(i);
    }
    return geom;
}

} // namespace nlpm
