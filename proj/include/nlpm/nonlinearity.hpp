#pragma once

namespace nlpm {

// Power nonlinearity |t|^{m-1} t for a fixed exponent m > 1.
// m = 1 (linear diffusion) is excluded by the constructor.
class PowerLaw {
public:
    explicit PowerLaw(double m);

    double exponent() const { return m_; }
    // Hoelder conjugate m' = m/(m-1).
    double conjugate_exponent() const { return m_ / (m_ - 1.0); }

    double phi(double t) const;
    double phi_prime(double t) const;
    double phi_inverse(double y) const;

private:
    double m_;
};

// C^1 regularization of the power law: exact power in the band
// epsilon <= |t| <= 1/epsilon, an odd polynomial a t^{M-1} + b t below it and
// an affine continuation above it, with value and slope matched at the
// junctions. The derivative is pinched between strictly positive constants,
// which keeps the Newton systems of the parabolic solver uniformly invertible.
class RegularizedPowerLaw {
public:
    RegularizedPowerLaw(double m, double epsilon, int M_even);
    // M defaults to the smallest even integer > m + 1.
    RegularizedPowerLaw(double m, double epsilon);

    static int default_M_even(double m);

    double exponent() const { return m_; }
    double epsilon() const { return eps_; }
    int poly_degree() const { return M_; }
    double coeff_a() const { return a_; }
    double coeff_b() const { return b_; }

    double value(double t) const;
    double derivative(double t) const;
    // Antiderivative with value 0 at t = 0 (even function of t).
    double antiderivative(double t) const;
    // Exact piecewise inverse; the polynomial piece is solved by bisection on
    // [0, epsilon] followed by two Newton polish steps.
    double inverse(double y) const;

    // Lower/upper bounds of the derivative: c = b_eps, C = (p-1) eps^{2-p}.
    double derivative_lower_bound() const { return b_; }
    double derivative_upper_bound() const;

    // Certified bound ((M+p-4)/(M-2)) eps^{p-1} on sup |Phi_eps - Phi| over
    // [0, K]; requires K <= 1/epsilon.
    double sup_gap_bound(double K) const;

private:
    double m_;    // exponent of the power law
    double p_;    // m + 1, the exponent used by the piecewise formulas
    double eps_;
    int M_;
    double a_, b_;

    double value_nonneg(double r) const;
};

} // namespace nlpm
