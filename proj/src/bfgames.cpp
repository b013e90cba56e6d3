#include "presb/bfgames.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "presb/error.hpp"

namespace presb {

namespace {

template <class Less>
std::vector<int> pattern(const Tuple& t, const Less& less) {
  std::vector<int> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      out.push_back(less(t[i], t[j]) ? -1 : (less(t[j], t[i]) ? 1 : 0));
    }
  }
  return out;
}

std::vector<int> rank_pattern(const Tuple& t) {
  return pattern(t, [](OrderIndex x, OrderIndex y) { return x < y; });
}

Tuple concat(const Tuple& a, const Tuple& b) {
  Tuple out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Interval sizes of {0..n-1} cut out by the distinct ranks in t.
std::vector<std::uint64_t> rank_intervals(std::uint64_t n, Tuple t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<std::uint64_t> out;
  std::uint64_t prev = 0;
  for (auto r : t) {
    out.push_back(r - prev);
    prev = r + 1;
  }
  out.push_back(n - prev);
  return out;
}

// Calls f on every ascending k-subset of pool; stops when f returns true.
bool any_subset(const std::vector<OrderIndex>& pool, std::size_t k, const std::function<bool(const Tuple&)>& f) {
  Tuple cur;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) {
    if (cur.size() == k) return f(cur);
    for (std::size_t i = from; i + (k - cur.size()) <= pool.size(); ++i) {
      cur.push_back(pool[i]);
      if (rec(i + 1)) return true;
      cur.pop_back();
    }
    return false;
  };
  return rec(0);
}

std::string show(const Tuple& t) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
  out << ")";
  return out.str();
}

// Ranks of tuple entries within a finite order.
Tuple to_ranks(const OrderPresentation& order, const Tuple& t) {
  auto elems = order.elements();
  Tuple out;
  for (auto x : t) {
    auto it = std::find(elems.begin(), elems.end(), x);
    if (it == elems.end()) throw OutOfDomain("index " + std::to_string(x) + " not in " + order.spec());
    out.push_back(static_cast<OrderIndex>(it - elems.begin()));
  }
  return out;
}

}  // namespace

OneVerdict leq_one_report(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                          const Tuple& b) {
  OneVerdict v;
  auto pa = pattern(a, [&](OrderIndex x, OrderIndex y) { return a_order.less(x, y); });
  auto pb = pattern(b, [&](OrderIndex x, OrderIndex y) { return b_order.less(x, y); });
  if (a.size() != b.size() || pa != pb) {
    v.pattern_mismatch = true;
    v.note = "PatternMismatch: " + show(a) + " and " + show(b) + " have different order types";
    return v;
  }
  auto sorted = [](const OrderPresentation& o, Tuple t) {
    std::sort(t.begin(), t.end(), [&](OrderIndex x, OrderIndex y) { return o.less(x, y); });
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  };
  auto ia = a_order.intervals(sorted(a_order, a));
  auto ib = b_order.intervals(sorted(b_order, b));
  v.holds = true;
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (ia[i] < ib[i]) {
      v.holds = false;
      v.note = "interval " + std::to_string(i) + " has size " + ia[i].to_string() + " < " + ib[i].to_string();
      break;
    }
  }
  return v;
}

bool leq_one(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order, const Tuple& b) {
  return leq_one_report(a_order, a, b_order, b).holds;
}

bool leq_one_bruteforce(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                        const Tuple& b) {
  if (!a_order.is_finite() || !b_order.is_finite()) throw NotFinite("brute force needs finite orders");
  auto less_a = [&](OrderIndex x, OrderIndex y) { return a_order.less(x, y); };
  auto less_b = [&](OrderIndex x, OrderIndex y) { return b_order.less(x, y); };
  if (a.size() != b.size() || pattern(a, less_a) != pattern(b, less_b)) return false;
  auto ea = a_order.elements();
  auto eb = b_order.elements();
  for (std::size_t k = 0; k <= eb.size(); ++k) {
    bool refuted = any_subset(eb, k, [&](const Tuple& d) {
      auto target = pattern(concat(b, d), less_b);
      bool answered = any_subset(ea, k, [&](const Tuple& c) { return pattern(concat(a, c), less_a) == target; });
      return !answered;
    });
    if (refuted) return false;
  }
  return true;
}

bool GameSolver::solve(std::uint64_t na, const Tuple& a, std::uint64_t nb, const Tuple& b, int alpha,
                       GameVerdict* why) {
  if (a.size() != b.size() || rank_pattern(a) != rank_pattern(b)) {
    if (why) why->note = "PatternMismatch: " + show(a) + " and " + show(b) + " have different order types";
    return false;
  }
  if (alpha == 1) {
    auto ia = rank_intervals(na, a), ib = rank_intervals(nb, b);
    for (std::size_t i = 0; i < ia.size(); ++i) {
      if (ia[i] < ib[i]) {
        if (why) {
          why->note = "interval " + std::to_string(i) + " has size " + std::to_string(ia[i]) + " < " +
                      std::to_string(ib[i]);
        }
        return false;
      }
    }
    return true;
  }
  Key key{na, a, nb, b, alpha};
  if (!why) {
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  std::vector<OrderIndex> free_b, all_a;
  for (OrderIndex i = 0; i < nb; ++i) {
    if (std::find(b.begin(), b.end(), i) == b.end()) free_b.push_back(i);
  }
  for (OrderIndex i = 0; i < na; ++i) all_a.push_back(i);
  bool result = true;
  for (int beta = 1; beta < alpha && result; ++beta) {
    for (std::size_t k = 0; k <= free_b.size() && result; ++k) {
      any_subset(free_b, k, [&](const Tuple& d) {
        Tuple bd = concat(b, d);
        auto target = rank_pattern(bd);
        bool answered = any_subset(all_a, k, [&](const Tuple& c) {
          Tuple ac = concat(a, c);
          return rank_pattern(ac) == target && solve(nb, bd, na, ac, beta, nullptr);
        });
        if (!answered) {
          result = false;
          if (why) {
            why->beta = beta;
            why->unanswerable = d;
            why->note = "no answer in A to " + show(d) + " at level " + std::to_string(beta);
          }
        }
        return !answered;
      });
    }
  }
  memo_[key] = result;
  return result;
}

bool GameSolver::leq_alpha(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                           const Tuple& b, int alpha) {
  return explain(a_order, a, b_order, b, alpha).holds;
}

GameVerdict GameSolver::explain(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order,
                                const Tuple& b, int alpha) {
  if (alpha < 1) throw std::invalid_argument("alpha must be at least 1");
  GameVerdict v;
  if (alpha == 1 && (!a_order.is_finite() || !b_order.is_finite())) {
    auto one = leq_one_report(a_order, a, b_order, b);
    v.holds = one.holds;
    v.note = one.note;
    return v;
  }
  if (!a_order.is_finite() || !b_order.is_finite()) {
    throw NotFinite("levels above 1 are computed on finite orders only");
  }
  v.holds = solve(*a_order.size(), to_ranks(a_order, a), *b_order.size(), to_ranks(b_order, b), alpha, &v);
  if (v.holds) v.note.clear();
  return v;
}

bool leq_alpha(const OrderPresentation& a_order, const Tuple& a, const OrderPresentation& b_order, const Tuple& b,
               int alpha) {
  GameSolver solver;
  return solver.leq_alpha(a_order, a, b_order, b, alpha);
}

}  // namespace presb
