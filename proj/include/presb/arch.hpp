#pragma once

// Archimedean classes, dependence equations over a basis, cuts, and the
// basis-driven construction of automorphisms and isomorphisms.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "presb/models.hpp"

namespace presb {

enum class ArchRelation { MuchLess, Equiv, MuchGreater };

std::string to_string(ArchRelation r);

/// Class comparison of nonzero x, y: MuchLess means N|x| < |y| for every N.
ArchRelation arch_compare(const Model& m, const GroupElement& x, const GroupElement& y);

/// True iff x is nonzero and archimedean equivalent to 1 (or the model has no
/// larger classes than the standard one). Divisible groups have no class of 1.
bool in_standard_class(const Model& m, const GroupElement& x);

/// fin(y): y is bounded above by some integer, i.e. y <= 0 or y not >> 1.
bool bounded_by_integer(const Model& m, const GroupElement& y);

/// The archimedean rank of the positive, residue-free, nonstandard sample
/// elements. BudgetExceeded when the sample is larger than the budget.
OrderPresentation recover_order(const Model& m, const std::vector<GroupElement>& sample, std::size_t budget);

/// The classes themselves, as one representative each, ascending.
std::vector<GroupElement> class_representatives(const Model& m, const std::vector<GroupElement>& sample);

/// m*g = k_1 b_1 + ... + k_n b_n with m > 0 and gcd(m, k) = 1.
struct DependenceEquation {
  Integer m = 1;
  std::vector<Integer> coeffs;
  friend bool operator==(const DependenceEquation&, const DependenceEquation&) = default;
};

std::string to_string(const DependenceEquation& eq);

/// Dependence of g over an independent basis; nullopt when g is outside the
/// rational span. ZeroElement for g == 0, PreconditionViolated when the basis
/// is itself dependent.
std::optional<DependenceEquation> dependence(const Model& m, const GroupElement& g,
                                             const std::vector<GroupElement>& basis);

/// sum k_i x_i, evaluated in the model.
GroupElement combine(const Model& m, const std::vector<Integer>& coeffs, const std::vector<GroupElement>& elements);

struct CutPredicate {
  std::size_t arity = 0;
  std::function<bool(const std::vector<Integer>&)> decide;
};

CutPredicate cut_of(const Model& m, const std::vector<GroupElement>& elements);

struct IndependenceVerdict {
  bool independent = true;
  /// A nontrivial integer relation when dependent.
  std::optional<std::vector<Integer>> relation;
};

/// Exact rational linear algebra on coordinates. When bound > 0 the verdict is
/// cross-checked by searching integer relations with |k_i| <= bound.
IndependenceVerdict is_linearly_independent(const Model& m, const std::vector<GroupElement>& elements,
                                            int bound = 0);

/// A Q-linear automorphism of P_L: identity on the Z part and on every basis
/// vector except `pivot`, which goes to sum image_of_pivot[i] f_i.
class PLAutomorphism {
 public:
  PLAutomorphism(Model model, OrderIndex pivot, std::map<OrderIndex, Rational> image_of_pivot);

  GroupElement apply(const GroupElement& x) const;
  OrderIndex pivot() const { return pivot_; }
  const std::map<OrderIndex, Rational>& image_of_pivot() const { return image_; }

 private:
  Model model_;
  OrderIndex pivot_;
  std::map<OrderIndex, Rational> image_;
};

/// An automorphism G fixing pi(a) for a in `fix` with G(p) = pi(l), l the
/// index of the class of p. PreconditionViolated when p is not positive and
/// infinite, has a Z part, or lies in the span of pi(fix).
PLAutomorphism build_automorphism(const Model& m, const std::vector<OrderIndex>& fix, const GroupElement& p);

struct IsomorphismOptions {
  /// Residues of basis elements are compared for moduli 1..residue_bound.
  std::uint64_t residue_bound = 64;
  /// Cuts are compared on every coefficient vector with entries in [-cut_box, cut_box].
  int cut_box = 3;
};

/// The image in dst of a src element with dependence m*g = k_0 + sum k_i b_i
/// over (1, basis_src): the solution a of m*a = k_0 + sum k_i b'_i.
/// DivisionFailed when no such a exists.
GroupElement extend_by_dependence(const Model& src, const Model& dst, const std::vector<GroupElement>& basis_src,
                                  const std::vector<GroupElement>& basis_dst, const GroupElement& g);

/// Checks the residue and cut conditions on the bases (the implicit 1 is
/// prepended to both) and returns the graph of the induced map on the probes.
std::vector<std::pair<GroupElement, GroupElement>> build_isomorphism(
    const Model& src, const Model& dst, const std::vector<GroupElement>& basis_src,
    const std::vector<GroupElement>& basis_dst, const std::vector<GroupElement>& probes,
    const IsomorphismOptions& options = {});

}  // namespace presb
