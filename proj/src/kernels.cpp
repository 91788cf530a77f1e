#include "nlpm/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "nlpm/errors.hpp"
#include "nlpm/special_functions.hpp"

namespace nlpm {

namespace {

void check_order(double s)
{
    if (!(s > 0.0) || !(s < 1.0))
        throw ValidationError("BadKernel", "requires 0 < s < 1");
}

int snap_to_node(const Vector& nodes, double x, double tol)
{
    const int n = static_cast<int>(nodes.size());
    const double dx = (nodes(n - 1) - nodes(0)) / (n - 1);
    const int k = static_cast<int>(std::round((x - nodes(0)) / dx));
    if (k < 0 || k >= n || std::fabs(nodes(k) - x) > tol)
        return -1;
    return k;
}

} // namespace

KernelSpec KernelSpec::fractional_laplacian(int n, double s)
{
    check_order(s);
    KernelSpec k;
    k.variant_ = KernelVariant::FractionalLaplacian;
    k.s_ = s;
    k.constant_ = normalization_constant(n, s);
    k.lambda_lo_ = k.lambda_hi_ = k.constant_;
    return k;
}

KernelSpec KernelSpec::fractional_conductivity(int n, double s,
                                               std::function<double(double)> gamma,
                                               double sample_lo, double sample_hi)
{
    check_order(s);
    KernelSpec k;
    k.variant_ = KernelVariant::FractionalConductivity;
    k.s_ = s;
    k.constant_ = normalization_constant(n, s);
    k.gamma_ = std::move(gamma);
    const double c_root = std::sqrt(k.constant_);
    auto gamma_fn_local = k.gamma_;
    k.factor_ = [c_root, gamma_fn_local](double x) {
        const double g = gamma_fn_local(x);
        if (!(g > 0.0))
            throw ValidationError("BadKernel", "conductivity gamma must be positive");
        return c_root * std::sqrt(g);
    };
    k.compute_bounds(sample_lo, sample_hi);
    return k;
}

KernelSpec KernelSpec::separable_analytic(double s, std::function<double(double)> factor,
                                          double sample_lo, double sample_hi)
{
    check_order(s);
    KernelSpec k;
    k.variant_ = KernelVariant::SeparableAnalytic;
    k.s_ = s;
    k.factor_ = std::move(factor);
    k.compute_bounds(sample_lo, sample_hi);
    return k;
}

KernelSpec KernelSpec::tabulated(double s, const Vector& nodes, const Matrix& values)
{
    check_order(s);
    if (nodes.size() < 2 || values.rows() != nodes.size() || values.cols() != nodes.size())
        throw ValidationError("BadKernel", "tabulated kernel needs a square table over the nodes");
    KernelSpec k;
    k.variant_ = KernelVariant::Tabulated;
    k.s_ = s;
    k.table_nodes_ = nodes;
    // symmetrize from the lower triangle
    Matrix sym = values;
    for (int i = 0; i < sym.rows(); ++i)
        for (int j = i + 1; j < sym.cols(); ++j)
            sym(i, j) = sym(j, i);
    k.table_ = sym;
    k.lambda_lo_ = sym.minCoeff();
    k.lambda_hi_ = sym.maxCoeff();
    if (!(k.lambda_lo_ > 0.0))
        throw ValidationError("BadKernel", "tabulated kernel must be strictly positive");
    return k;
}

void KernelSpec::compute_bounds(double lo, double hi)
{
    const int samples = 4096;
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    for (int i = 0; i <= samples; ++i) {
        const double x = lo + (hi - lo) * i / samples;
        const double g = factor_(x);
        fmin = std::min(fmin, g);
        fmax = std::max(fmax, g);
    }
    if (!(fmin > 0.0))
        throw ValidationError("BadKernel", "kernel factor must stay positive (uniform ellipticity)");
    lambda_lo_ = fmin * fmin;
    lambda_hi_ = fmax * fmax;
}

double KernelSpec::evaluate(double x, double y) const
{
    switch (variant_) {
    case KernelVariant::FractionalLaplacian:
        return constant_;
    case KernelVariant::FractionalConductivity:
    case KernelVariant::SeparableAnalytic:
        return factor_(x) * factor_(y);
    case KernelVariant::Tabulated: {
        const int i = snap_to_node(table_nodes_, x, 1e-9);
        const int j = snap_to_node(table_nodes_, y, 1e-9);
        if (i < 0 || j < 0)
            throw ValidationError("OffGridEvaluation",
                                  "tabulated kernels are defined on grid nodes only");
        return table_(i, j);
    }
    }
    return constant_;
}

double KernelSpec::quad_eval(double x, double y) const
{
    if (variant_ != KernelVariant::Tabulated)
        return evaluate(x, y);
    const Vector& nd = table_nodes_;
    const int n = static_cast<int>(nd.size());
    const double dx = (nd(n - 1) - nd(0)) / (n - 1);
    auto clampi = [&](double v) {
        int k = static_cast<int>(std::round((v - nd(0)) / dx));
        return std::min(std::max(k, 0), n - 1);
    };
    return table_(clampi(x), clampi(y));
}

double KernelSpec::conductivity_gamma(double x) const
{
    if (variant_ != KernelVariant::FractionalConductivity)
        throw std::logic_error("conductivity_gamma: not a conductivity kernel");
    return gamma_(x);
}

std::string KernelSpec::variant_name() const
{
    switch (variant_) {
    case KernelVariant::FractionalLaplacian: return "fractional_laplacian";
    case KernelVariant::FractionalConductivity: return "fractional_conductivity";
    case KernelVariant::SeparableAnalytic: return "separable_analytic";
    case KernelVariant::Tabulated: return "tabulated";
    }
    return "unknown";
}

} // namespace nlpm
