#include "nlpm/assembly.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "nlpm/errors.hpp"

namespace nlpm {

namespace {

// Gauss-Legendre nodes/weights on [0, 1]
constexpr double kG4x[4] = {0.06943184420297371, 0.33000947820757187,
                            0.6699905217924281, 0.9305681557970262};
constexpr double kG4w[4] = {0.1739274225687269, 0.3260725774312731,
                            0.3260725774312731, 0.1739274225687269};
constexpr double kG8x[8] = {0.019855071751231856, 0.10166676129318664,
                            0.2372337950418355,  0.40828267875217505,
                            0.5917173212478249,  0.7627662049581645,
                            0.8983332387068134,  0.9801449282487682};
constexpr double kG8w[8] = {0.05061426814518813, 0.11119051722668723,
                            0.15685332293894363, 0.18134189168918097,
                            0.18134189168918097, 0.15685332293894363,
                            0.11119051722668723, 0.05061426814518813};

// hats restricted to one element: at most two, affine
struct PanelHat {
    int node;
    double slope;
};

struct Panel {
    double a, b;
    PanelHat hats[2];
    int n_hats;
};

// the quadrature domain is the truncated square [-R, R]^2; contributions with
// |y| > R are dropped (their size is reported by truncation_row_deficit)
std::vector<Panel> make_panels(const DiscreteGeometry& geom)
{
    const int n = geom.n();
    const double dx = geom.dx;
    std::vector<Panel> panels(n - 1);
    for (int p = 0; p + 1 < n; ++p) {
        Panel& pan = panels[p];
        pan.a = geom.nodes(p);
        pan.b = pan.a + dx;
        pan.n_hats = 2;
        pan.hats[0] = {p, -1.0 / dx};     // falling hat
        pan.hats[1] = {p + 1, 1.0 / dx};  // rising hat
    }
    return panels;
}

} // namespace

Matrix assemble_stiffness(const DiscreteGeometry& geom, const KernelSpec& kernel)
{
    const int n = geom.n();
    const double s = kernel.order_half();
    const double dx = geom.dx;
    const auto panels = make_panels(geom);
    const int P = static_cast<int>(panels.size());

    Matrix A = Matrix::Zero(n, n);
    auto add = [&](int i, int j, double v) { A(i, j) += v; };

    const double pow_same = 2.0 - 2.0 * s; // u^{1-2s} absorbed on identical panels
    const double pow_adj = 3.0 - 2.0 * s;  // xi^{2-2s} absorbed on adjacent panels

    for (int e = 0; e < P; ++e) {
        const Panel& pe = panels[e];

        // identical panels: phi_i(x)-phi_i(y) = slope_i (x-y), integrate
        // 2 int_0^dx u^{1-2s} int K(y+u,y) dy du with u = dx tau^{1/(2-2s)}
        double base = 0.0;
        for (int qt = 0; qt < 8; ++qt) {
            const double u = dx * std::pow(kG8x[qt], 1.0 / pow_same);
            const double len = dx - u;
            double inner = 0.0;
            for (int qy = 0; qy < 8; ++qy) {
                const double y = pe.a + len * kG8x[qy];
                inner += kG8w[qy] * kernel.quad_eval(y + u, y);
            }
            base += kG8w[qt] * len * inner;
        }
        base *= 2.0 * std::pow(dx, pow_same) / pow_same;
        for (int hi = 0; hi < pe.n_hats; ++hi)
            for (int hj = 0; hj < pe.n_hats; ++hj)
                add(pe.hats[hi].node, pe.hats[hj].node,
                    pe.hats[hi].slope * pe.hats[hj].slope * base);

        // adjacent pair (e, e+1): corner singularity at the shared node, two
        // Duffy triangles with the radial power absorbed; doubled for the
        // mirrored ordering
        if (e + 1 < P) {
            const Panel& pf = panels[e + 1];
            const double bshare = pe.b;
            int nodes[3];
            double Ac[3], Bc[3];
            int nh = 0;
            auto slot = [&](int node) {
                for (int k = 0; k < nh; ++k)
                    if (nodes[k] == node)
                        return k;
                nodes[nh] = node;
                Ac[nh] = Bc[nh] = 0.0;
                return nh++;
            };
            // x = b - xi on e, y = b + eta on f:
            // phi_i(x)-phi_i(y) = -sl_e xi - sl_f eta
            for (int k = 0; k < pe.n_hats; ++k)
                Ac[slot(pe.hats[k].node)] = -pe.hats[k].slope;
            for (int k = 0; k < pf.n_hats; ++k)
                Bc[slot(pf.hats[k].node)] = -pf.hats[k].slope;

            double tri[3][3] = {{0}};
            for (int qs = 0; qs < 8; ++qs) {
                const double r = dx * std::pow(kG8x[qs], 1.0 / pow_adj);
                for (int qt = 0; qt < 8; ++qt) {
                    const double t = kG8x[qt];
                    const double wst = kG8w[qs] * kG8w[qt] * std::pow(1.0 + t, -1.0 - 2.0 * s);
                    const double k1 = kernel.quad_eval(bshare - r, bshare + r * t);
                    const double k2 = kernel.quad_eval(bshare - r * t, bshare + r);
                    for (int i = 0; i < nh; ++i)
                        for (int j = i; j < nh; ++j) {
                            const double d1 = (Ac[i] + Bc[i] * t) * (Ac[j] + Bc[j] * t);
                            const double d2 = (Ac[i] * t + Bc[i]) * (Ac[j] * t + Bc[j]);
                            tri[i][j] += wst * (k1 * d1 + k2 * d2);
                        }
                }
            }
            const double scale = 2.0 * std::pow(dx, pow_adj) / pow_adj;
            for (int i = 0; i < nh; ++i)
                for (int j = i; j < nh; ++j) {
                    add(nodes[i], nodes[j], scale * tri[i][j]);
                    if (i != j)
                        add(nodes[j], nodes[i], scale * tri[i][j]);
                }
        }

        // distant pairs: 4-point tensor Gauss, doubled; hats on e enter with
        // phi(x), hats on f with -phi(y)
        for (int f = e + 2; f < P; ++f) {
            const Panel& pf = panels[f];
            for (int qx = 0; qx < 4; ++qx) {
                const double x = pe.a + dx * kG4x[qx];
                for (int qy = 0; qy < 4; ++qy) {
                    const double y = pf.a + dx * kG4x[qy];
                    const double w = kG4w[qx] * kG4w[qy] * kernel.quad_eval(x, y) *
                                     std::pow(std::fabs(x - y), -1.0 - 2.0 * s);
                    double diff[4];
                    int nid[4];
                    int cnt = 0;
                    for (int k = 0; k < pe.n_hats; ++k) {
                        nid[cnt] = pe.hats[k].node;
                        diff[cnt++] = geom.hat(pe.hats[k].node, x);
                    }
                    for (int k = 0; k < pf.n_hats; ++k) {
                        nid[cnt] = pf.hats[k].node;
                        diff[cnt++] = -geom.hat(pf.hats[k].node, y);
                    }
                    for (int i = 0; i < cnt; ++i)
                        for (int j = 0; j < cnt; ++j)
                            add(nid[i], nid[j], 2.0 * dx * dx * w * diff[i] * diff[j]);
                }
            }
        }
    }

    // exact symmetry
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (A(i, j) + A(j, i));
            A(i, j) = v;
            A(j, i) = v;
        }

    if (!A.allFinite())
        throw SolverError("QuadratureFailure", "non-finite stiffness entry");
    return A;
}

double truncation_row_deficit(const DiscreteGeometry& geom, const KernelSpec& kernel, int row)
{
    // size of the dropped |y| > R contribution for the constant function:
    // 2/(2s) int phi_row(x) [K(x,R)(R-x)^{-2s} + K(x,-R)(x+R)^{-2s}] dx.
    // Meaningful for rows away from the boundary (the integrand is smooth on
    // the hat support there).
    const double s = kernel.order_half();
    const double R = geom.config.R;
    const double dx = geom.dx;
    const double xc = geom.nodes(row);
    double acc = 0.0;
    for (int e = -1; e <= 0; ++e) {
        const double a = xc + e * dx;
        for (int q = 0; q < 8; ++q) {
            const double x = a + dx * kG8x[q];
            if (x <= -R || x >= R)
                continue;
            const double t = kernel.quad_eval(x, R) * std::pow(R - x, -2.0 * s) +
                             kernel.quad_eval(x, -R) * std::pow(x + R, -2.0 * s);
            acc += kG8w[q] * dx * geom.hat(row, x) * t;
        }
    }
    return acc / s; // 2/(2s)
}

namespace {

void add_element_mass(Matrix& M, int il, int ir, double wl, double wr, double dx)
{
    // exact integrals of a linear weight against the two element hats
    M(il, il) += dx * (wl / 4.0 + wr / 12.0);
    M(il, ir) += dx * (wl + wr) / 12.0;
    M(ir, il) += dx * (wl + wr) / 12.0;
    M(ir, ir) += dx * (wl / 12.0 + wr / 4.0);
}

} // namespace

Matrix assemble_mass_full(const DiscreteGeometry& geom)
{
    const int n = geom.n();
    Matrix M = Matrix::Zero(n, n);
    for (int e = 0; e + 1 < n; ++e)
        add_element_mass(M, e, e + 1, 1.0, 1.0, geom.dx);
    return M;
}

Matrix assemble_mass_omega(const DiscreteGeometry& geom, const Vector& weight)
{
    const int n = geom.n();
    const double lo = geom.config.omega.lo, hi = geom.config.omega.hi;
    Matrix M = Matrix::Zero(n, n);
    for (int e = 0; e + 1 < n; ++e) {
        const double xm = 0.5 * (geom.nodes(e) + geom.nodes(e + 1));
        if (xm < lo || xm > hi)
            continue;
        add_element_mass(M, e, e + 1, weight(e), weight(e + 1), geom.dx);
    }
    return M;
}

AssembledForms assemble_forms(const DiscreteGeometry& geom, const KernelSpec& kernel,
                              const Vector& rho, const Vector& q)
{
    AssembledForms forms;
    forms.A = assemble_stiffness(geom, kernel);
    const KernelSpec unit = KernelSpec::separable_analytic(
        kernel.order_half(), [](double) { return 1.0; }, geom.support_lo(), geom.support_hi());
    forms.A_unit = assemble_stiffness(geom, unit);
    forms.M_full = assemble_mass_full(geom);
    forms.M_omega = assemble_mass_omega(geom, Vector::Ones(geom.n()));
    forms.M_rho = assemble_mass_omega(geom, rho);
    forms.M_q = assemble_mass_omega(geom, q);
    forms.M_rho_lumped = forms.M_rho.rowwise().sum();
    forms.M_q_lumped = forms.M_q.rowwise().sum();
    return forms;
}

double discrete_seminorm(const DiscreteGeometry& geom, double s, const Vector& field)
{
    const KernelSpec unit = KernelSpec::separable_analytic(
        s, [](double) { return 1.0; }, geom.support_lo(), geom.support_hi());
    return discrete_seminorm(assemble_stiffness(geom, unit), field);
}

double discrete_seminorm(const Matrix& A_unit, const Vector& field)
{
    const double q = field.dot(A_unit * field);
    return std::sqrt(std::max(q, 0.0));
}

double discrete_hs_norm(const AssembledForms& forms, const Vector& field)
{
    const double l2 = field.dot(forms.M_full * field);
    const double semi = field.dot(forms.A_unit * field);
    return std::sqrt(std::max(l2, 0.0) + std::max(semi, 0.0));
}

double discrete_dual_norm(const Matrix& gram, const Vector& functional)
{
    Eigen::LDLT<Matrix> ldlt(gram);
    const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    const double dmin = ldlt.vectorD().minCoeff();
    if (ldlt.info() != Eigen::Success || !(dmin > 1e-14 * dmax))
        throw SolverError("SingularGram", "Gram matrix is not positive definite");
    const Vector z = ldlt.solve(functional);
    return std::sqrt(std::max(functional.dot(z), 0.0));
}

double smallest_interior_eigenvalue(const DiscreteGeometry& geom, const Matrix& A)
{
    const int ni = static_cast<int>(geom.interior.size());
    Matrix Ai(ni, ni);
    for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b)
            Ai(a, b) = A(geom.interior[a], geom.interior[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(Ai, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace nlpm
