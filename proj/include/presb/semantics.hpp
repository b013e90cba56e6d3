#pragma once

// Evaluating formulas in concrete models, and the syntactic transformations
// between order sentences, P_L and its basis.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "presb/formula.hpp"
#include "presb/models.hpp"

namespace presb {

using Environment = std::map<std::string, GroupElement>;

/// UnboundVariable for variables missing from env; NotPlain for nonzero
/// constants in a divisible group.
GroupElement eval_term(const Model& m, const TermPtr& t, const Environment& env);

/// Quantifier-free formulas, starred atoms and fin() included.
bool eval_qf(const Model& m, const FormulaPtr& f, const Environment& env);

/// Any formula: star-free ones with quantifiers go through quantifier
/// elimination (Presburger models only); starred ones through eval_star.
bool eval(const Model& m, const FormulaPtr& f, const Environment& env = {});

/// Quantifiers range over {pi(l) : l in L}. NotFiniteOrder unless m is P_L
/// over a finite order.
bool eval_star(const Model& m, const FormulaPtr& f, const Environment& env = {});

struct SharpResult {
  FormulaPtr formula;
  /// The fresh variables standing for pi(l_1), ..., pi(l_k).
  std::vector<std::string> vars;
};

/// Replaces the free variable `var` by q_1 x_1 + ... + q_k x_k + z and clears
/// denominators atom by atom. Fresh names default to var1, var2, ... and skip
/// names already used in f.
SharpResult substitute_sharp(const FormulaPtr& f, const std::string& var, const TauDecomposition& p);

/// Order-language formula (atoms between variables) to its starred form:
/// x<y to x<*y, x=y to x=*y, universal quantifiers guarded by fin(y), and
/// existential ones relativised to ~fin(y) & y > 0.
FormulaPtr translate_star(const FormulaPtr& f);

/// At least n archimedean classes strictly between the classes of x and y,
/// with the class of x below that of y. NonPositive unless 0 < x, y.
bool phi_n_between(const Model& m, std::uint64_t n, const GroupElement& x, const GroupElement& y);

struct AxiomReport {
  /// Division axioms n <= bound hold on every sample element.
  bool pr = true;
  /// No sample element was refuted as non-plain.
  bool plain = true;
  /// The plain verdict is backed by an exact decomposition, not only by
  /// residues up to the bound.
  bool plain_certified = true;
  /// For archimedean equivalent residue-free sample pairs x, y there are n, m
  /// with n|x| - m|y| zero or in a strictly smaller class.
  bool psi = true;
  std::optional<std::pair<GroupElement, GroupElement>> psi_counterexample;
  std::vector<std::string> notes;
};

AxiomReport check_pr_plain_psi(const Model& m, const std::vector<GroupElement>& sample, std::uint64_t bound);

}  // namespace presb
