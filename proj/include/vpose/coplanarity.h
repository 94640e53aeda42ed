#pragma once

#include "vpose/geometry.h"

#include <array>
#include <map>
#include <vector>

namespace vpose {

// Exponents of Tx, Ty, Tz, t. Total degree stays <= 6 everywhere the solver
// touches this type.
struct Monomial {
    std::array<int, 4> e{0, 0, 0, 0};

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }
    Monomial operator*(const Monomial &rhs) const {
        return Monomial{{e[0] + rhs.e[0], e[1] + rhs.e[1], e[2] + rhs.e[2], e[3] + rhs.e[3]}};
    }
    // Componentwise quotient; valid only if divides() holds.
    Monomial operator/(const Monomial &rhs) const {
        return Monomial{{e[0] - rhs.e[0], e[1] - rhs.e[1], e[2] - rhs.e[2], e[3] - rhs.e[3]}};
    }
    bool divides(const Monomial &m) const {
        return e[0] <= m.e[0] && e[1] <= m.e[1] && e[2] <= m.e[2] && e[3] <= m.e[3];
    }
    bool operator==(const Monomial &rhs) const { return e == rhs.e; }
    // Storage order only (plain lexicographic on exponents); the solver's
    // monomial order lives in drl_compare.
    bool operator<(const Monomial &rhs) const { return e < rhs.e; }

    static Monomial one() { return Monomial{}; }
    static Monomial Tx() { return Monomial{{1, 0, 0, 0}}; }
    static Monomial Ty() { return Monomial{{0, 1, 0, 0}}; }
    static Monomial Tz() { return Monomial{{0, 0, 1, 0}}; }
    static Monomial t() { return Monomial{{0, 0, 0, 1}}; }
};

std::string to_string(const Monomial &m);

// Sparse polynomial in (Tx, Ty, Tz, t); zero coefficients are never stored.
class Poly4 {
  public:
    Poly4() = default;

    void add_term(const Monomial &m, double coeff);
    double coeff(const Monomial &m) const;
    const std::map<Monomial, double> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int degree() const;

    double evaluate(const Eigen::Vector4d &x) const;
    Eigen::Vector4d gradient(const Eigen::Vector4d &x) const;
    Poly4 scaled(double s) const;

  private:
    std::map<Monomial, double> terms_;
};

// A pair of homologous rays, both gravity-aligned.
struct Correspondence {
    BearingVector m1 = BearingVector::Zero();
    BearingVector m2 = BearingVector::Zero();
};

// f1 = Tx^2 + Ty^2 + Tz^2 - 1 plus one coplanarity polynomial per sample.
// f2..f4 are homogeneous of degree 1 in (Tx, Ty, Tz) and degree <= 2 in t.
struct CoplanaritySystem {
    Poly4 f1;
    Poly4 f2;
    Poly4 f3;
    Poly4 f4;

    const Poly4 &f(int index) const;  // index in 1..4
    Eigen::Vector4d evaluate(const Eigen::Vector4d &x) const;
    Eigen::Matrix4d jacobian(const Eigen::Vector4d &x) const;
};

// A solution of the system: unit baseline direction and tan-half-yaw.
struct SystemSolution {
    Translation3 T = Translation3::Zero();
    double t = 0.0;

    Eigen::Vector4d as_vector() const { return Eigen::Vector4d(T.x(), T.y(), T.z(), t); }
};

class DegenerateSystem : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Expansion of (1 + t^2) * m2^T [T]x R_phi(t) m1 with
// cos(phi) = (1 - t^2)/(1 + t^2) and sin(phi) = 2t/(1 + t^2).
// The nine possible monomials are {Tx, Ty, Tz} x {1, t, t^2}.
Poly4 coplanarity_poly(const Correspondence &c);

// f1 plus the three instanced coplanarity polynomials.
CoplanaritySystem build_system(const std::array<Correspondence, 3> &samples);

// Independent reference solver. Writes (f2, f3, f4) = A(t) (Tx, Ty, Tz)^T with
// A quadratic in t, expands det A(t) (degree <= 6), takes real roots from
// companion-matrix eigenvalues, and recovers +-T from the null space of A at
// each root. Candidates are Newton-polished and residual-checked to 1e-8.
std::vector<SystemSolution> solve_det_oracle(const CoplanaritySystem &sys);

// 3x3 matrix A(t) with (f2, f3, f4) = A(t) * T. Exposed for the solver's
// null-space fallback.
Eigen::Matrix3d coefficient_matrix_at(const CoplanaritySystem &sys, double t);

// Up to `steps` Newton iterations on the square system f1..f4. Returns the
// refined point (unchanged if the Jacobian goes singular).
Eigen::Vector4d polish_solution(const CoplanaritySystem &sys, Eigen::Vector4d x, int steps);

// Canonical ordering and duplicate removal shared by both solution routes.
void canonicalize_solutions(std::vector<SystemSolution> &sols);

}  // namespace vpose
