#pragma once

#include <functional>
#include <string>

#include "nlpm/geometry.hpp"

namespace nlpm {

enum class KernelVariant {
    FractionalLaplacian,    // K = C_{n,s}
    FractionalConductivity, // K = C_{n,s} gamma^{1/2}(x) gamma^{1/2}(y)
    SeparableAnalytic,      // K = F(gamma(x)) F(gamma(y))
    Tabulated,              // symmetric node-indexed table
};

// Symmetric, uniformly elliptic kernel of an order-2s integro-differential
// operator. Evaluation is arranged so that K(x,y) == K(y,x) holds to the bit.
class KernelSpec {
public:
    static KernelSpec fractional_laplacian(int n, double s);
    // gamma must be uniformly elliptic on the grid support
    static KernelSpec fractional_conductivity(int n, double s,
                                              std::function<double(double)> gamma,
                                              double sample_lo, double sample_hi);
    static KernelSpec separable_analytic(double s, std::function<double(double)> factor,
                                         double sample_lo, double sample_hi);
    // values(i,j) = K(nodes_i, nodes_j); only the lower triangle is read
    static KernelSpec tabulated(double s, const Vector& nodes, const Matrix& values);

    double order_half() const { return s_; } // the exponent s
    KernelVariant variant() const { return variant_; }
    double lambda_lo() const { return lambda_lo_; }
    double lambda_hi() const { return lambda_hi_; }

    // Strict evaluation: the tabulated variant rejects points off its grid.
    double evaluate(double x, double y) const;

    // Evaluation used by the assembly quadrature; identical to evaluate()
    // except that the tabulated variant snaps each coordinate to the nearest
    // node (a symmetric rule, so the assembled matrix stays symmetric).
    double quad_eval(double x, double y) const;

    // gamma(x) for the conductivity variant (throws otherwise)
    double conductivity_gamma(double x) const;

    std::string variant_name() const;

private:
    KernelSpec() = default;

    KernelVariant variant_ = KernelVariant::FractionalLaplacian;
    double s_ = 0.5;
    double constant_ = 1.0;                  // C_{n,s} for the Laplacian variant
    std::function<double(double)> factor_;   // separable factor g with K = g(x) g(y)
    std::function<double(double)> gamma_;    // conductivity coefficient
    Vector table_nodes_;
    Matrix table_;
    double lambda_lo_ = 1.0, lambda_hi_ = 1.0;

    void compute_bounds(double lo, double hi);
};

} // namespace nlpm
