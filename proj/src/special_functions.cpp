#include "nlpm/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpm {

namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's table).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double gamma_positive(double x)
{
    // valid for x > 0.5
    const double g = 7.0;
    double a = kLanczos[0];
    const double t = x + g - 0.5;
    for (int i = 1; i < 9; ++i)
        a += kLanczos[i] / (x - 1.0 + i);
    return std::sqrt(2.0 * M_PI) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

} // namespace

double gamma_fn(double x)
{
    if (x == std::floor(x) && x <= 0.0)
        throw std::invalid_argument("gamma_fn: pole at non-positive integer");
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return M_PI / (std::sin(M_PI * x) * gamma_positive(1.0 - x));
    }
    return gamma_positive(x);
}

double beta_fn(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("beta_fn: arguments must be positive");
    // Work in log space to postpone overflow for large arguments.
    if (a + b > 100.0) {
        return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    }
    return gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b);
}

double normalization_constant(int n, double s)
{
    if (n < 1)
        throw std::invalid_argument("normalization_constant: dimension must be >= 1");
    if (!(s > 0.0) || !(s < 1.0))
        throw std::invalid_argument("normalization_constant: requires 0 < s < 1");
    const double num = std::pow(4.0, s) * gamma_fn(0.5 * n + s);
    const double den = std::pow(M_PI, 0.5 * n) * std::fabs(gamma_fn(-s));
    return num / den;
}

} // namespace nlpm
