#pragma once

// Computable presentations of countable linear orders. Elements are natural
// number indices; infinite orders fix a computable pairing from indices to
// their underlying values.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "presb/numeric.hpp"

namespace presb {

using OrderIndex = std::uint64_t;

/// A size in N plus one symbol for "countably infinite".
struct Cardinality {
  bool infinite = false;
  std::uint64_t count = 0;

  static Cardinality finite(std::uint64_t n) { return {false, n}; }
  static Cardinality omega() { return {true, 0}; }

  friend bool operator==(const Cardinality&, const Cardinality&) = default;
  friend std::strong_ordering operator<=>(const Cardinality& a, const Cardinality& b) {
    if (a.infinite != b.infinite) return a.infinite ? std::strong_ordering::greater : std::strong_ordering::less;
    return a.count <=> b.count;
  }
  friend Cardinality operator+(const Cardinality& a, const Cardinality& b) {
    if (a.infinite || b.infinite) return omega();
    return finite(a.count + b.count);
  }

  std::string to_string() const { return infinite ? "inf" : std::to_string(count); }
};

class OrderPresentation {
 public:
  enum class Kind { Finite, Omega, Zeta, Eta, Sum, LexPairs, OmegaPower };

  static OrderPresentation finite(std::uint64_t k);
  static OrderPresentation omega();
  static OrderPresentation zeta();
  static OrderPresentation eta();
  static OrderPresentation sum(const OrderPresentation& first, const OrderPresentation& second);
  /// The product A*B: compare the B coordinates first, then the A coordinates.
  static OrderPresentation lex_pairs(const OrderPresentation& a, const OrderPresentation& b);
  static OrderPresentation omega_power(unsigned k);

  /// "finite:5", "omega", "zeta", "eta", "sum(A,B)", "lex(A,B)", "omega^k".
  static OrderPresentation parse(std::string_view spec);
  std::string spec() const;

  Kind kind() const;
  /// Number of elements when finite.
  std::optional<std::uint64_t> size() const;
  bool is_finite() const { return size().has_value(); }
  bool contains(OrderIndex i) const;

  /// Strict total order on indices; throws OutOfDomain for foreign indices.
  std::strong_ordering compare(OrderIndex i, OrderIndex j) const;
  bool less(OrderIndex i, OrderIndex j) const { return compare(i, j) < 0; }

  /// Sizes of (-inf,a1), (a1,a2), ..., (ak,inf) for a strictly ascending tuple.
  /// Throws NotComputable for LexPairs and OmegaPower.
  std::vector<Cardinality> intervals(std::span<const OrderIndex> tuple) const;

  /// Elements in ascending order (finite orders only; NotFinite otherwise).
  std::vector<OrderIndex> elements() const;

  /// Human readable value behind an index, e.g. "-3" for zeta or "1/2" for eta.
  std::string describe(OrderIndex i) const;

  // Index codecs of the infinite families.
  static OrderIndex zeta_index(const Integer& z);
  static Integer zeta_value(OrderIndex i);
  static OrderIndex eta_index(const Rational& q);
  static Rational eta_value(OrderIndex i);
  /// Omega^k elements are tuples (c_1..c_k) meaning w^{k-1} c_1 + ... + c_k.
  OrderIndex omega_power_index(const std::vector<std::uint64_t>& coords) const;
  std::vector<std::uint64_t> omega_power_coords(OrderIndex i) const;
  /// Index of the i-th element of the first (or second) summand of a Sum.
  OrderIndex sum_index(bool second, OrderIndex inner) const;
  /// Index of the pair (a, b) of a LexPairs order.
  OrderIndex pair_index(OrderIndex a, OrderIndex b) const;

  friend bool operator==(const OrderPresentation& a, const OrderPresentation& b) { return a.spec() == b.spec(); }

 private:
  struct Node;
  explicit OrderPresentation(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

}  // namespace presb
