#pragma once

namespace nlpm {

// Gamma function on the real line (poles at 0, -1, -2, ... excluded).
// Lanczos approximation, ~14 significant digits on [-0.9, 20] away from poles;
// negative arguments via the reflection formula.
double gamma_fn(double x);

// Euler beta function B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), a,b > 0.
// Throws std::invalid_argument for non-positive arguments.
double beta_fn(double a, double b);

// Normalization constant of the order-2s fractional Laplacian in dimension n:
//   4^s Gamma(n/2+s) / (pi^{n/2} |Gamma(-s)|).
// Requires n >= 1 and 0 < s < 1; throws std::invalid_argument otherwise.
double normalization_constant(int n, double s);

} // namespace nlpm
