#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nlpm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x > lo && x < hi; } // open interval
    double length() const { return hi - lo; }
};

struct GeometryConfig {
    double R = 4.0;              // grid covers [-R, R]
    int n_nodes = 129;
    Interval omega{-1.0, 1.0};   // domain of the PDE
    Interval W1{1.25, 2.75};     // exterior window carrying the data
    Interval W2{1.75, 3.25};     // exterior window carrying the tests
};

// Uniform truncated line geometry. Hats are clipped to [-R, R]; all kernel
// quadrature runs over the truncated square [-R, R]^2 and contributions from
// |y| > R are dropped (the truncation deficit diagnostic measures their size).
struct DiscreteGeometry {
    GeometryConfig config;
    Vector nodes;                // n_nodes uniformly spaced points, -R..R
    double dx = 0.0;

    std::vector<int> interior;   // nodes with x in closure(omega)
    std::vector<int> exterior;   // complement
    std::vector<int> w1_nodes;   // nodes whose hat support fits inside W1
    std::vector<int> w2_nodes;   // same for W2

    std::vector<bool> is_interior;

    int n() const { return static_cast<int>(nodes.size()); }
    double support_lo() const { return nodes(0); }
    double support_hi() const { return nodes(n() - 1); }

    // piecewise-linear hat centred at node i
    double hat(int i, double x) const;

    // trapezoid weights of nodal integration over omega (zero outside)
    Vector omega_weights() const;

    // restrict/scatter between full nodal vectors and the interior block
    Vector restrict_interior(const Vector& full) const;
    Vector scatter_interior(const Vector& interior_part) const;
};

// Validates windows and spacing; throws ValidationError with codes
// DisjointWindows, WindowTouchesDomain, WindowOutsideGrid, WindowEmpty,
// BadGeometry, OmegaOffGrid.
DiscreteGeometry build_geometry(const GeometryConfig& config);

} // namespace nlpm
