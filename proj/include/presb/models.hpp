#pragma once

// Exact arithmetic in concrete Presburger groups and divisible ordered
// abelian groups:
//
//   StandardZ        (Z, +, <, 0, 1)
//   PL over L        V_L x Z, V_L the lexicographic direct sum of Q indexed by L
//   ZAdjoin(r)       Z[r], Z with an element X of residue sequence r adjoined
//   QuadSum(S)       V_S x Z, V_S the direct sum over n of Q(sqrt p_n) (n in S) or Q
//   Cut(alpha)       C({1, alpha}) x Z for an irrational alpha given by its cut
//
// PL, QuadSum and Cut also exist without the Z factor (pure divisible groups);
// product_with_z / divisible_part move between the two.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "presb/numeric.hpp"
#include "presb/orders.hpp"
#include "presb/residues.hpp"

namespace presb {

struct ZInt {
  Integer value;
  friend bool operator==(const ZInt&, const ZInt&) = default;
};

/// sum_l support[l] * f_l + z. Support values are never zero.
struct PLElem {
  std::map<OrderIndex, Rational> support;
  Integer z = 0;
  friend bool operator==(const PLElem&, const PLElem&) = default;
};

/// a + z * (X - r_n) / n, kept canonical: z == 0 implies n == 1, otherwise gcd(z, n) == 1.
struct ZAdjoinElem {
  Integer a = 0;
  Integer z = 0;
  Integer n = 1;
  friend bool operator==(const ZAdjoinElem&, const ZAdjoinElem&) = default;
};

/// a + b * sqrt(p_n) inside the n-th summand.
struct QuadCoord {
  Rational a;
  Rational b;
  friend bool operator==(const QuadCoord&, const QuadCoord&) = default;
};

/// Coordinates are never (0, 0).
struct QuadSumElem {
  std::map<std::uint64_t, QuadCoord> coords;
  Integer z = 0;
  friend bool operator==(const QuadSumElem&, const QuadSumElem&) = default;
};

/// a + b * alpha + z.
struct CutElem {
  Rational a;
  Rational b;
  Integer z = 0;
  friend bool operator==(const CutElem&, const CutElem&) = default;
};

using GroupElement = std::variant<ZInt, PLElem, ZAdjoinElem, QuadSumElem, CutElem>;

/// A decidable set of naturals, optionally with its finite member list.
struct DecidableSet {
  std::function<bool(std::uint64_t)> contains;
  std::optional<std::set<std::uint64_t>> members;
  std::string description;

  static DecidableSet finite(std::set<std::uint64_t> members);
};

/// An irrational real alpha presented by its lower cut {q : q < alpha}.
struct Irrational {
  std::function<bool(const Rational&)> below;
  std::string description;

  /// sqrt(n) for a non-square n > 1.
  static Irrational sqrt(std::uint64_t n);
  /// "sqrt:N".
  static Irrational parse(const std::string& spec);
};

/// Axis of the rational coordinate space a model embeds into. Every model
/// element is a finite rational combination of these axes.
struct CoordKey {
  enum Axis : int { One = 0, PLBasis = 1, Adjoined = 2, QuadRational = 3, QuadRoot = 4, CutUnit = 5, Alpha = 6 };
  int axis = One;
  std::uint64_t index = 0;
  friend auto operator<=>(const CoordKey&, const CoordKey&) = default;
};

using Coordinates = std::map<CoordKey, Rational>;

class Model {
 public:
  enum class Kind { StandardZ, PL, ZAdjoin, QuadSum, Cut };

  static Model standard_z();
  /// P_L = V_L x Z.
  static Model pl(const OrderPresentation& order);
  /// V_L on its own.
  static Model vl(const OrderPresentation& order);
  static Model zadjoin(const ResidueSequence& r);
  /// V_S x Z.
  static Model quadsum(const DecidableSet& s);
  static Model quadsum_divisible(const DecidableSet& s);
  /// C({1, alpha}) x Z.
  static Model cut(const Irrational& alpha);
  static Model cut_closure(const Irrational& alpha);

  Kind kind() const;
  /// True for the Presburger groups (everything except the bare divisible groups).
  bool has_integer_part() const;
  bool is_divisible() const { return !has_integer_part(); }
  std::string describe() const;

  const OrderPresentation& order() const;
  const ResidueSequence& residues() const;
  const DecidableSet& quad_set() const;
  const Irrational& alpha() const;

  /// Throws TagMismatch unless x is a well-formed element of this model.
  void check(const GroupElement& x) const;
  bool accepts(const GroupElement& x) const;

  GroupElement zero() const;
  /// 1 of a Presburger group; NotPlain for divisible groups.
  GroupElement one() const;
  GroupElement from_integer(const Integer& k) const;

  GroupElement add(const GroupElement& x, const GroupElement& y) const;
  GroupElement neg(const GroupElement& x) const;
  GroupElement sub(const GroupElement& x, const GroupElement& y) const;
  GroupElement scale(const Integer& k, const GroupElement& x) const;
  std::strong_ordering compare(const GroupElement& x, const GroupElement& y) const;
  int sign(const GroupElement& x) const;
  bool is_zero(const GroupElement& x) const;

  /// The definable residue of x mod n, in [0, n). Zero in divisible groups.
  Integer residue(const GroupElement& x, const Integer& n) const;

  /// The unique y with n*y = x, or nullopt when residue(x, n) != 0.
  std::optional<GroupElement> solve_div(const GroupElement& x, const Integer& n) const;

  /// The unique y with den(q)*y = num(q)*x. NotDivisible when no such y exists.
  GroupElement scalar_q(const Rational& q, const GroupElement& x) const;

  /// x = v + z with every residue of v zero. NotPlain when the model is not
  /// known to be plain (ZAdjoin without an integer witness, divisible groups).
  std::pair<GroupElement, Integer> decompose_plain(const GroupElement& x) const;

  /// Exact test that all residues of x vanish.
  bool in_divisible_part(const GroupElement& x) const;

  /// Embedding into a rational vector space; injective and additive.
  Coordinates coordinates(const GroupElement& x) const;

  /// Element literal grammar, e.g. "{l1:1/2,l3:-2};z=3", "a=1,z=2,n=4", "X",
  /// "{0:(1,-1)};z=0", "(3,-2);z=1", or a bare integer.
  GroupElement parse_element(const std::string& text) const;
  std::string format(const GroupElement& x) const;

  /// Uniformly-ish random element with coefficients bounded by magnitude.
  GroupElement random_element(std::mt19937_64& rng, int magnitude = 5) const;

  // ZAdjoin helpers: the element c*X + d of Q X + Q, when it lies in Z[r].
  std::optional<ZAdjoinElem> zadjoin_from_formal(const Rational& c, const Rational& d) const;
  std::pair<Rational, Rational> zadjoin_formal(const ZAdjoinElem& x) const;
  /// Canonical representative of a + z (X - r_n)/n.
  ZAdjoinElem zadjoin_canonical(const Integer& a, const Integer& z, const Integer& n) const;
  /// X itself.
  GroupElement adjoined() const;

  friend Model product_with_z(const Model& divisible);
  friend Model divisible_part(const Model& product);

 private:
  struct Impl;
  explicit Model(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// V x Z for a bare divisible group V.
Model product_with_z(const Model& divisible);
/// V for a product V x Z (NotPlain otherwise).
Model divisible_part(const Model& product);

/// Images of the elements in B / <1> = V: their divisible components, as
/// elements of divisible_part(m).
std::vector<GroupElement> quotient_by_standard(const Model& m, const std::vector<GroupElement>& elements);

/// pi(l) = (f_l, 0) in P_L.
GroupElement pi_embed(const Model& m, OrderIndex l);

/// The unique (l_1 < ... < l_k, q_1..q_k nonzero, z) with p = sum q_i pi(l_i) + z.
struct TauDecomposition {
  std::vector<OrderIndex> indices;
  std::vector<Rational> coefficients;
  Integer z = 0;
  friend bool operator==(const TauDecomposition&, const TauDecomposition&) = default;
};

TauDecomposition tau_decompose(const Model& m, const GroupElement& p);

/// t_p(x_1..x_k) = sum q_i pi(x_i) + z, using the coefficients of `shape`.
GroupElement t_p(const Model& m, const TauDecomposition& shape, const std::vector<OrderIndex>& at);

/// {"kind":"z"}, {"kind":"pl","order":"finite:3"}, {"kind":"zadjoin","set":[0,3]},
/// {"kind":"quadsum","set":[1,2]}, {"kind":"cut","alpha":"sqrt:2"}; optional
/// "divisible": true selects the bare divisible group.
Model model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Model& m);

}  // namespace presb
