#include "vpose/coplanarity.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace vpose {

std::string to_string(const Monomial &m) {
    static const char *names[4] = {"Tx", "Ty", "Tz", "t"};
    std::string s;
    for (int i = 0; i < 4; ++i) {
        if (m.e[i] == 0) continue;
        s += names[i];
        if (m.e[i] > 1) s += std::to_string(m.e[i]);
    }
    return s.empty() ? "1" : s;
}

void Poly4::add_term(const Monomial &m, double coeff) {
    if (coeff == 0.0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Poly4::coeff(const Monomial &m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

int Poly4::degree() const {
    int d = 0;
    for (const auto &[m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

double Poly4::evaluate(const Eigen::Vector4d &x) const {
    double s = 0.0;
    for (const auto &[m, c] : terms_) {
        double v = c;
        for (int i = 0; i < 4; ++i) {
            for (int k = 0; k < m.e[i]; ++k) v *= x[i];
        }
        s += v;
    }
    return s;
}

Eigen::Vector4d Poly4::gradient(const Eigen::Vector4d &x) const {
    Eigen::Vector4d g = Eigen::Vector4d::Zero();
    for (const auto &[m, c] : terms_) {
        for (int i = 0; i < 4; ++i) {
            if (m.e[i] == 0) continue;
            double v = c * m.e[i];
            for (int j = 0; j < 4; ++j) {
                const int p = (j == i) ? m.e[j] - 1 : m.e[j];
                for (int k = 0; k < p; ++k) v *= x[j];
            }
            g[i] += v;
        }
    }
    return g;
}

Poly4 Poly4::scaled(double s) const {
    Poly4 out;
    for (const auto &[m, c] : terms_) out.add_term(m, c * s);
    return out;
}

const Poly4 &CoplanaritySystem::f(int index) const {
    switch (index) {
        case 1: return f1;
        case 2: return f2;
        case 3: return f3;
        default: return f4;
    }
}

Eigen::Vector4d CoplanaritySystem::evaluate(const Eigen::Vector4d &x) const {
    return Eigen::Vector4d(f1.evaluate(x), f2.evaluate(x), f3.evaluate(x), f4.evaluate(x));
}

Eigen::Matrix4d CoplanaritySystem::jacobian(const Eigen::Vector4d &x) const {
    Eigen::Matrix4d J;
    J.row(0) = f1.gradient(x).transpose();
    J.row(1) = f2.gradient(x).transpose();
    J.row(2) = f3.gradient(x).transpose();
    J.row(3) = f4.gradient(x).transpose();
    return J;
}

Poly4 coplanarity_poly(const Correspondence &c) {
    if (c.m1.norm() == 0.0 || c.m2.norm() == 0.0) {
        throw std::invalid_argument("correspondence rays must be nonzero");
    }
    const double a1 = c.m1.x(), b1 = c.m1.y(), c1 = c.m1.z();
    const double a2 = c.m2.x(), b2 = c.m2.y(), c2 = c.m2.z();

    const Monomial Tx = Monomial::Tx(), Ty = Monomial::Ty(), Tz = Monomial::Tz(), t = Monomial::t();
    const Monomial t2 = t * t;

    Poly4 p;
    p.add_term(Tx, b2 * c1 - b1 * c2);
    p.add_term(Tx * t, 2.0 * a1 * b2);
    p.add_term(Tx * t2, -(b2 * c1 + b1 * c2));
    p.add_term(Ty, a1 * c2 - a2 * c1);
    p.add_term(Ty * t, -2.0 * (a1 * a2 + c1 * c2));
    p.add_term(Ty * t2, a2 * c1 - a1 * c2);
    p.add_term(Tz, a2 * b1 - a1 * b2);
    p.add_term(Tz * t, 2.0 * b2 * c1);
    p.add_term(Tz * t2, a2 * b1 + a1 * b2);
    return p;
}

CoplanaritySystem build_system(const std::array<Correspondence, 3> &samples) {
    CoplanaritySystem sys;
    const Monomial Tx = Monomial::Tx(), Ty = Monomial::Ty(), Tz = Monomial::Tz();
    sys.f1.add_term(Tx * Tx, 1.0);
    sys.f1.add_term(Ty * Ty, 1.0);
    sys.f1.add_term(Tz * Tz, 1.0);
    sys.f1.add_term(Monomial::one(), -1.0);
    sys.f2 = coplanarity_poly(samples[0]);
    sys.f3 = coplanarity_poly(samples[1]);
    sys.f4 = coplanarity_poly(samples[2]);
    return sys;
}

Eigen::Matrix3d coefficient_matrix_at(const CoplanaritySystem &sys, double t) {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    const Eigen::Vector3d tp(1.0, t, t * t);
    for (int row = 0; row < 3; ++row) {
        for (const auto &[m, c] : sys.f(row + 2).terms()) {
            const int var = m.e[0] ? 0 : (m.e[1] ? 1 : 2);
            A(row, var) += c * tp[m.e[3]];
        }
    }
    return A;
}

Eigen::Vector4d polish_solution(const CoplanaritySystem &sys, Eigen::Vector4d x, int steps) {
    for (int i = 0; i < steps; ++i) {
        const Eigen::Vector4d F = sys.evaluate(x);
        const Eigen::Matrix4d J = sys.jacobian(x);
        Eigen::FullPivLU<Eigen::Matrix4d> lu(J);
        if (!lu.isInvertible()) break;
        x -= lu.solve(F);
    }
    return x;
}

void canonicalize_solutions(std::vector<SystemSolution> &sols) {
    std::sort(sols.begin(), sols.end(), [](const SystemSolution &a, const SystemSolution &b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.T.z() != b.T.z()) return a.T.z() < b.T.z();
        if (a.T.y() != b.T.y()) return a.T.y() < b.T.y();
        return a.T.x() < b.T.x();
    });
    std::vector<SystemSolution> unique;
    for (const SystemSolution &s : sols) {
        bool dup = false;
        for (const SystemSolution &u : unique) {
            if (std::abs(s.t - u.t) <= 1e-7 * (1.0 + std::abs(u.t)) && (s.T - u.T).norm() <= 1e-7) {
                dup = true;
                break;
            }
        }
        if (!dup) unique.push_back(s);
    }
    sols = std::move(unique);
}

namespace {

// det A(t) as a univariate polynomial, degree <= 6, coefficients ascending.
std::array<double, 7> determinant_poly(const CoplanaritySystem &sys) {
    // Entry (i, j) of A(t) as quadratic coefficients [1, t, t^2].
    double an[3][3][3] = {};
    for (int row = 0; row < 3; ++row) {
        for (const auto &[m, c] : sys.f(row + 2).terms()) {
            const int var = m.e[0] ? 0 : (m.e[1] ? 1 : 2);
            an[row][var][m.e[3]] += c;
        }
    }
    auto mul = [](const double *a, int da, const double *b, int db, double *out) {
        for (int i = 0; i <= da + db; ++i) out[i] = 0.0;
        for (int i = 0; i <= da; ++i)
            for (int j = 0; j <= db; ++j) out[i + j] += a[i] * b[j];
    };
    std::array<double, 7> det{};
    static const int perm[6][4] = {{0, 1, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, +1},
                                   {0, 2, 1, -1}, {1, 0, 2, -1}, {2, 1, 0, -1}};
    for (const auto &p : perm) {
        double t4[5], t6[7];
        mul(an[0][p[0]], 2, an[1][p[1]], 2, t4);
        mul(t4, 4, an[2][p[2]], 2, t6);
        for (int i = 0; i < 7; ++i) det[i] += p[3] * t6[i];
    }
    return det;
}

}  // namespace

std::vector<SystemSolution> solve_det_oracle(const CoplanaritySystem &sys) {
    const std::array<double, 7> det = determinant_poly(sys);

    double scale = 0.0;
    for (int row = 2; row <= 4; ++row) {
        for (const auto &[m, c] : sys.f(row).terms()) scale = std::max(scale, std::abs(c));
    }
    double mag = 0.0;
    for (double c : det) mag = std::max(mag, std::abs(c));
    if (mag < 1e-12 * std::max(1.0, scale * scale * scale)) {
        throw DegenerateSystem("determinant polynomial is identically zero");
    }

    int deg = 6;
    while (deg > 0 && std::abs(det[deg]) < 1e-13 * mag) --deg;
    if (deg == 0) {
        throw DegenerateSystem("determinant polynomial has no roots");
    }

    // Companion matrix of the monic determinant polynomial.
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -det[i] / det[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> eig(C, /*computeEigenvectors=*/false);

    std::vector<SystemSolution> sols;
    for (int k = 0; k < deg; ++k) {
        const std::complex<double> root = eig.eigenvalues()[k];
        if (std::abs(root.imag()) > 1e-8 * (1.0 + std::abs(root.real()))) continue;
        const double t = root.real();

        const Eigen::Matrix3d A = coefficient_matrix_at(sys, t);
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(A, Eigen::ComputeFullV);
        Eigen::Vector3d T = svd.matrixV().col(2);
        T.normalize();

        for (double sign : {1.0, -1.0}) {
            Eigen::Vector4d x(sign * T.x(), sign * T.y(), sign * T.z(), t);
            x = polish_solution(sys, x, 5);
            if (sys.evaluate(x).cwiseAbs().maxCoeff() < 1e-8) {
                sols.push_back(SystemSolution{x.head<3>(), x[3]});
            }
        }
    }
    canonicalize_solutions(sols);
    return sols;
}

}  // namespace vpose
