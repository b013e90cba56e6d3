#pragma once

// The back-and-forth relations (A, a) <=_alpha (B, b) on linear orders.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "presb/orders.hpp"

namespace presb {

using Tuple = std::vector<OrderIndex>;

struct OneVerdict {
  bool holds = false;
  /// Set when the tuples have different order patterns (then holds == false).
  bool pattern_mismatch = false;
  std::string note;
};

/// Interval criterion: same order pattern and every interval of A cut out by
/// a is at least as large as the matching interval of B cut out by b.
OneVerdict leq_one_report(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                          const Tuple& b);
bool leq_one(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order, const Tuple& b);

/// Definition-level check on finite orders: every extension d of b by
/// elements of B has a matching extension c of a with the same pattern.
bool leq_one_bruteforce(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                        const Tuple& b);

struct GameVerdict {
  bool holds = false;
  /// For a failure: the level beta and the extension d of b that A cannot answer.
  std::optional<int> beta;
  std::optional<Tuple> unanswerable;
  std::string note;
};

/// Memoised solver; one instance per query or per batch of related queries.
class GameSolver {
 public:
  bool leq_alpha(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order, const Tuple& b,
                 int alpha);
  GameVerdict explain(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                      const Tuple& b, int alpha);
  std::size_t memo_size() const { return memo_.size(); }

 private:
  // Orders up to isomorphism: sizes and rank patterns of the tuples.
  using Key = std::tuple<std::uint64_t, std::vector<std::uint64_t>, std::uint64_t, std::vector<std::uint64_t>, int>;

  bool solve(std::uint64_t na, const Tuple& a, std::uint64_t nb, const Tuple& b, int alpha,
             GameVerdict* why);

  std::map<Key, bool> memo_;
};

bool leq_alpha(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order, const Tuple& b,
               int alpha);

}  // namespace presb
