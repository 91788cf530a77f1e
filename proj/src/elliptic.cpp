#include "nlpm/elliptic.hpp"

#include "nlpm/errors.hpp"

namespace nlpm {

Vector solve_elliptic(const DiscreteGeometry& geom, const Matrix& A, const Vector& F,
                      const Vector& f_exterior)
{
    const int ni = static_cast<int>(geom.interior.size());
    Matrix Ai(ni, ni);
    for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b)
            Ai(a, b) = A(geom.interior[a], geom.interior[b]);

    Vector u = Vector::Zero(geom.n());
    for (int j : geom.exterior)
        u(j) = f_exterior(j);

    Vector rhs(ni);
    for (int a = 0; a < ni; ++a) {
        double coupling = 0.0;
        for (int j : geom.exterior)
            coupling += A(geom.interior[a], j) * u(j);
        rhs(a) = F(geom.interior[a]) - coupling;
    }

    Eigen::LDLT<Matrix> ldlt(Ai);
    const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 1e-14 * dmax))
        throw SolverError("SingularInteriorBlock",
                          "interior stiffness block is not positive definite");
    const Vector ui = ldlt.solve(rhs);
    for (int a = 0; a < ni; ++a)
        u(geom.interior[a]) = ui(a);
    return u;
}

Vector solve_elliptic_field(const DiscreteGeometry& geom, const Matrix& A, const Matrix& M_full,
                            const Vector& g, const Vector& f_exterior)
{
    return solve_elliptic(geom, A, M_full * g, f_exterior);
}

double elliptic_residual(const DiscreteGeometry& geom, const Matrix& A, const Vector& F,
                         const Vector& u)
{
    const Vector r = A * u - F;
    const Vector au_abs = A.cwiseAbs() * u.cwiseAbs();
    double num = 0.0, den = 1e-300;
    for (int i : geom.interior) {
        num = std::max(num, std::fabs(r(i)));
        den = std::max(den, au_abs(i) + std::fabs(F(i)));
    }
    return num / den;
}

} // namespace nlpm
