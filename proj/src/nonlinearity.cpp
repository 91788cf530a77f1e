#include "nlpm/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace nlpm {

PowerLaw::PowerLaw(double m) : m_(m)
{
    if (!(m > 1.0))
        throw std::invalid_argument("PowerLaw: requires m > 1");
}

double PowerLaw::phi(double t) const
{
    if (t == 0.0)
        return 0.0;
    const double r = std::fabs(t);
    return std::copysign(std::pow(r, m_), t);
}

double PowerLaw::phi_prime(double t) const
{
    return m_ * std::pow(std::fabs(t), m_ - 1.0);
}

double PowerLaw::phi_inverse(double y) const
{
    if (y == 0.0)
        return 0.0;
    const double r = std::fabs(y);
    return std::copysign(std::pow(r, 1.0 / m_), y);
}

int RegularizedPowerLaw::default_M_even(double m)
{
    const double p = m + 1.0;
    int M = static_cast<int>(std::floor(p)) + 1;
    if (M % 2 != 0)
        ++M;
    if (static_cast<double>(M) <= p) // p landed on an even integer
        M += 2;
    return M;
}

RegularizedPowerLaw::RegularizedPowerLaw(double m, double epsilon)
    : RegularizedPowerLaw(m, epsilon, default_M_even(m))
{
}

RegularizedPowerLaw::RegularizedPowerLaw(double m, double epsilon, int M_even)
    : m_(m), p_(m + 1.0), eps_(epsilon), M_(M_even)
{
    if (!(m > 1.0))
        throw std::invalid_argument("RegularizedPowerLaw: requires m > 1");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("RegularizedPowerLaw: requires 0 < epsilon < 1");
    if (M_ % 2 != 0 || static_cast<double>(M_) <= p_)
        throw std::invalid_argument("RegularizedPowerLaw: M must be even with M > m+1");
    a_ = (p_ - 2.0) / (M_ - 2.0) * std::pow(eps_, p_ - static_cast<double>(M_));
    b_ = (static_cast<double>(M_) - p_) / (M_ - 2.0) * std::pow(eps_, p_ - 2.0);
}

double RegularizedPowerLaw::value_nonneg(double r) const
{
    if (r <= eps_)
        return a_ * std::pow(r, M_ - 1.0) + b_ * r;
    if (r <= 1.0 / eps_)
        return std::pow(r, p_ - 1.0);
    return (p_ - 1.0) * std::pow(eps_, 2.0 - p_) * r + (2.0 - p_) * std::pow(eps_, 1.0 - p_);
}

// Evaluated as sign(t) * f(|t|) so the odd symmetry is exact to the bit.
double RegularizedPowerLaw::value(double t) const
{
    if (t == 0.0)
        return 0.0;
    return std::copysign(value_nonneg(std::fabs(t)), t);
}

double RegularizedPowerLaw::derivative(double t) const
{
    const double r = std::fabs(t);
    if (r <= eps_)
        return (M_ - 1.0) * a_ * std::pow(r, M_ - 2.0) + b_;
    if (r <= 1.0 / eps_)
        return (p_ - 1.0) * std::pow(r, p_ - 2.0);
    return (p_ - 1.0) * std::pow(eps_, 2.0 - p_);
}

double RegularizedPowerLaw::antiderivative(double t) const
{
    const double r = std::fabs(t);
    // piecewise primitives of value_nonneg, glued continuously
    const double at_eps = a_ / M_ * std::pow(eps_, M_) + 0.5 * b_ * eps_ * eps_;
    if (r <= eps_)
        return a_ / M_ * std::pow(r, M_) + 0.5 * b_ * r * r;
    const double inv_eps = 1.0 / eps_;
    if (r <= inv_eps)
        return at_eps + (std::pow(r, p_) - std::pow(eps_, p_)) / p_;
    const double at_cut = at_eps + (std::pow(inv_eps, p_) - std::pow(eps_, p_)) / p_;
    const double slope = (p_ - 1.0) * std::pow(eps_, 2.0 - p_);
    const double icpt = (2.0 - p_) * std::pow(eps_, 1.0 - p_);
    return at_cut + 0.5 * slope * (r * r - inv_eps * inv_eps) + icpt * (r - inv_eps);
}

double RegularizedPowerLaw::derivative_upper_bound() const
{
    return (p_ - 1.0) * std::pow(eps_, 2.0 - p_);
}

double RegularizedPowerLaw::sup_gap_bound(double K) const
{
    if (!(K > 0.0) || K > 1.0 / eps_)
        throw std::invalid_argument("sup_gap_bound: requires 0 < K <= 1/epsilon");
    return (static_cast<double>(M_) + p_ - 4.0) / (M_ - 2.0) * std::pow(eps_, p_ - 1.0);
}

double RegularizedPowerLaw::inverse(double y) const
{
    if (y == 0.0)
        return 0.0;
    const double ay = std::fabs(y);
    const double at_eps = value_nonneg(eps_);
    double r;
    if (ay >= at_eps) {
        const double at_cut = value_nonneg(1.0 / eps_);
        if (ay <= at_cut) {
            r = std::pow(ay, 1.0 / (p_ - 1.0));
        } else {
            const double slope = (p_ - 1.0) * std::pow(eps_, 2.0 - p_);
            const double icpt = (2.0 - p_) * std::pow(eps_, 1.0 - p_);
            r = (ay - icpt) / slope;
        }
    } else {
        // monotone polynomial a r^{M-1} + b r = ay on [0, eps]
        double lo = 0.0, hi = eps_;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (value_nonneg(mid) < ay)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-15 * eps_)
                break;
        }
        r = 0.5 * (lo + hi);
        for (int it = 0; it < 2; ++it) {
            const double f = value_nonneg(r) - ay;
            const double df = derivative(r);
            r -= f / df;
            if (r < 0.0) r = 0.0;
            if (r > eps_) r = eps_;
        }
    }
    return std::copysign(r, y);
}

} // namespace nlpm
