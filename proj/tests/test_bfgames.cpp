#include <doctest.h>

#include <random>

#include "presb/bfgames.hpp"
#include "presb/error.hpp"
#include "presb/semantics.hpp"

using namespace presb;

namespace {

std::vector<Tuple> ascending_tuples(std::uint64_t n, std::size_t max_len) {
  std::vector<Tuple> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_len) continue;
    OrderIndex from = out[i].empty() ? 0 : out[i].back() + 1;
    for (OrderIndex x = from; x < n; ++x) {
      auto t = out[i];
      t.push_back(x);
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("level one on small cases") {
  auto f = [](std::uint64_t k) { return OrderPresentation::finite(k); };
  CHECK(leq_one(f(3), {}, f(2), {}));
  CHECK_FALSE(leq_one(f(2), {}, f(3), {}));
  CHECK(leq_one(OrderPresentation::omega(), {}, f(5), {}));
  CHECK(leq_one_bruteforce(f(3), {}, f(2), {}));
  CHECK_FALSE(leq_one_bruteforce(f(2), {}, f(3), {}));
  auto mismatch = leq_one_report(f(3), {0, 1}, f(3), {1, 0});
  CHECK(mismatch.pattern_mismatch);
  CHECK_FALSE(mismatch.holds);
}

TEST_CASE("level one agrees with the definition on small orders") {
  for (std::uint64_t na = 0; na <= 4; ++na)
    for (std::uint64_t nb = 0; nb <= 4; ++nb) {
      auto a = OrderPresentation::finite(na), b = OrderPresentation::finite(nb);
      for (const auto& ta : ascending_tuples(na, 2))
        for (const auto& tb : ascending_tuples(nb, 2))
          if (ta.size() == tb.size()) CHECK(leq_one(a, ta, b, tb) == leq_one_bruteforce(a, ta, b, tb));
    }
}

TEST_CASE("higher levels") {
  auto f = [](std::uint64_t k) { return OrderPresentation::finite(k); };
  CHECK_FALSE(leq_alpha(f(3), {}, f(2), {}, 2));
  CHECK_FALSE(leq_alpha(f(2), {}, f(3), {}, 2));
  for (std::uint64_t k = 0; k <= 4; ++k)
    for (int alpha = 1; alpha <= 4; ++alpha) CHECK(leq_alpha(f(k), {}, f(k), {}, alpha));
  GameSolver solver;
  auto v = solver.explain(f(2), {}, f(3), {}, 2);
  CHECK_FALSE(v.holds);
  CHECK(v.beta == 1);
  CHECK(solver.memo_size() > 0);
  CHECK_THROWS_AS(leq_alpha(OrderPresentation::omega(), {}, f(2), {}, 2), NotFinite);
  CHECK_THROWS_AS(leq_alpha(f(2), {}, f(2), {}, 0), std::invalid_argument);
}

TEST_CASE("levels are monotone") {
  std::mt19937_64 rng(21);
  GameSolver solver;
  for (int i = 0; i < 40; ++i) {
    std::uint64_t na = rng() % 5, nb = rng() % 5;
    std::size_t len = std::min<std::uint64_t>({na, nb, rng() % 2});
    auto pick = [&](std::uint64_t n) {
      auto all = ascending_tuples(n, len);
      std::erase_if(all, [&](const Tuple& t) { return t.size() != len; });
      return all[rng() % all.size()];
    };
    auto a = OrderPresentation::finite(na), b = OrderPresentation::finite(nb);
    auto ta = pick(na), tb = pick(nb);
    bool prev = true;
    for (int alpha = 1; alpha <= 3; ++alpha) {
      bool now = solver.leq_alpha(a, ta, b, tb, alpha);
      if (!prev) CHECK_FALSE(now);
      prev = now;
    }
  }
}

TEST_CASE("level one transfers class counts in P_L") {
  for (std::uint64_t na = 2; na <= 4; ++na)
    for (std::uint64_t nb = 2; nb <= 4; ++nb) {
      auto a = OrderPresentation::finite(na), b = OrderPresentation::finite(nb);
      auto pa = Model::pl(a), pb = Model::pl(b);
      Tuple ta{0, na - 1}, tb{0, nb - 1};
      bool transfer = true;
      for (std::uint64_t n = 0; n <= 4; ++n) {
        if (phi_n_between(pb, n, pi_embed(pb, 0), pi_embed(pb, nb - 1)) &&
            !phi_n_between(pa, n, pi_embed(pa, 0), pi_embed(pa, na - 1)))
          transfer = false;
      }
      CHECK(leq_one(a, ta, b, tb) == transfer);
    }
}
