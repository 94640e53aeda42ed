#pragma once

#include "vpose/coplanarity.h"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace vpose {

// Degree reverse lexicographic comparison with precedence (Tx, Ty, Tz, t):
// a < b iff the last nonzero entry of
//   (deg_Tx(b)-deg_Tx(a), ..., deg_t(b)-deg_t(a), deg(a)-deg(b))
// is negative. Returns -1, 0 or +1.
int drl_compare(const Monomial &a, const Monomial &b);

struct DrlLess {
    bool operator()(const Monomial &a, const Monomial &b) const { return drl_compare(a, b) < 0; }
};
struct DrlGreater {
    bool operator()(const Monomial &a, const Monomial &b) const { return drl_compare(a, b) > 0; }
};

// One row of the elimination template: multiplier * f_index.
struct TemplateProduct {
    Monomial multiplier;
    int poly_index;  // 1..4
};

// The fixed 65-product elimination template and its 77-column monomial
// layout. Rows are ordered so that m*f_i precedes u*f_j when i < j, or i == j
// and m < u in DRL. Columns are the union of product supports, DRL-descending.
class MacaulayTemplate {
  public:
    static const MacaulayTemplate &instance();

    const std::vector<TemplateProduct> &products() const { return products_; }
    const std::vector<Monomial> &columns() const { return columns_; }
    int rows() const { return static_cast<int>(products_.size()); }
    int cols() const { return static_cast<int>(columns_.size()); }
    int column_index(const Monomial &m) const;  // -1 if absent

  private:
    MacaulayTemplate();
    std::vector<TemplateProduct> products_;
    std::vector<Monomial> columns_;
    std::map<Monomial, int> column_index_;
};

// Dense instance of the template on a concrete system.
struct MacaulayMatrix {
    Eigen::MatrixXd M;  // 65 x 77
    const MacaulayTemplate *tpl = nullptr;
};

MacaulayMatrix build_macaulay(const CoplanaritySystem &sys, const MacaulayTemplate &tpl = MacaulayTemplate::instance());

// The 12 monomials spanned by the template's non-pivot columns on
// nondegenerate input, DRL-descending:
//   TxTz^2, Tz^3, TxTz, TyTz, Tz^2, Tz*t, t^2, Tx, Ty, Tz, t, 1.
// Multiplication by t maps this set into reducible monomials, which is what
// the action construction relies on.
const std::vector<Monomial> &quotient_basis();

// Result of Gaussian elimination on the Macaulay matrix. Rows are fully
// reduced: each holds its pivot (leading) monomial plus a tail supported on
// the quotient-basis columns only. Rows whose leading monomial moved during
// elimination form the extracted basis of the ideal slice.
class EliminationResult {
  public:
    const std::vector<Monomial> &basis() const { return basis_; }
    const std::vector<Monomial> &leading_monomials() const { return leading_; }
    const std::vector<Poly4> &changed_rows() const { return changed_rows_; }

    // Normal form of a monomial over the quotient basis; empty when the
    // reduction escapes the table (monomial neither in the basis nor
    // reducible through pivots).
    std::optional<Eigen::VectorXd> normal_form(const Monomial &m) const;

    int basis_index(const Monomial &m) const;  // -1 if absent

  private:
    friend EliminationResult eliminate_to_groebner(const MacaulayMatrix &mac);
    std::vector<Monomial> basis_;                 // non-pivot columns, DRL-descending
    std::vector<Monomial> leading_;               // pivot monomials, DRL-descending
    std::map<Monomial, Eigen::VectorXd> tails_;   // pivot monomial -> NF over basis
    std::vector<Poly4> changed_rows_;             // monic rows with moved leading monomial
    std::map<Monomial, int> basis_index_;
};

// Sequential Gaussian elimination in template row order, no row swaps.
// A row whose entries all fall below 1e-12 of its scale signals a degenerate
// configuration. The non-pivot columns must come out as quotient_basis().
EliminationResult eliminate_to_groebner(const MacaulayMatrix &mac);

// c0 + cx*Tx + cy*Ty + cz*Tz + ct*t.
struct LinearForm {
    double c0 = 0.0, cx = 0.0, cy = 0.0, cz = 0.0, ct = 0.0;
};

// Multiplication-by-form matrix on the quotient basis: column j is the normal
// form of form * basis[j]. Throws if any product's reduction escapes.
Eigen::MatrixXd action_matrix(const EliminationResult &elim, const std::vector<Monomial> &basis,
                              const LinearForm &form);

// The fixed action form used by solve_system, drawn once from a documented
// seed; supported on {1, t} so every product stays reducible.
const LinearForm &solver_action_form();

// Full pipeline: build_macaulay -> eliminate -> action matrix -> eigenvectors
// -> candidate read-off (direct coordinates; null-space of A(t) as fallback)
// -> two Newton steps -> residual filter at 1e-6. Canonically ordered,
// at most 12 solutions; an empty result is valid.
std::vector<SystemSolution> solve_system(const CoplanaritySystem &sys);

// Diagnostic elimination over all 175 degree-bounded products instead of the
// pruned 65. Reports shape, rank and the non-pivot monomials; this mode does
// not drive the solver (its candidate space is far larger than 12).
struct FullTemplateReport {
    int rows = 0;
    int cols = 0;
    int rank = 0;
    std::vector<Monomial> non_pivots;
};
FullTemplateReport eliminate_full_template(const CoplanaritySystem &sys);

struct SelfTestReport {
    bool template_degree_ok = false;   // all 65 products have degree <= 6
    bool shape_ok = false;             // 65 x 77
    bool quotient_dimension_ok = false;  // 12 non-pivot columns
    bool oracle_agreement_ok = false;  // solve_system matches the oracle
    int num_solutions = 0;
    double mean_solve_us = 0.0;
    std::vector<Monomial> basis;
    std::vector<Monomial> leading_monomials;
    std::string to_string() const;
    bool all_ok() const {
        return template_degree_ok && shape_ok && quotient_dimension_ok && oracle_agreement_ok;
    }
};

// Structural self-check on a seeded random instance plus solve timing.
SelfTestReport selftest(unsigned seed = 7u, int timing_iterations = 2000);

}  // namespace vpose
