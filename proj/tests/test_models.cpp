#include <doctest.h>

#include <cmath>
#include <random>

#include "presb/error.hpp"
#include "presb/models.hpp"

using namespace presb;

namespace {

std::vector<Model> sample_models() {
  return {Model::standard_z(),
          Model::pl(OrderPresentation::finite(3)),
          Model::pl(OrderPresentation::zeta()),
          Model::vl(OrderPresentation::eta()),
          Model::zadjoin(encode_set({0, 2})),
          Model::zadjoin(residue_of_integer(Integer(17))),
          Model::quadsum(DecidableSet::finite({0, 1})),
          Model::quadsum_divisible(DecidableSet::finite({2})),
          Model::cut(Irrational::sqrt(2)),
          Model::cut_closure(Irrational::sqrt(3))};
}

// c*X + d lies in Z[r] iff d + num(c) * r_den(c) / den(c) is an integer.
bool formal_member(const ResidueSequence& r, const Rational& c, const Rational& d) {
  Integer n = c.get_den(), z = c.get_num();
  Rational a = d + Rational(z * r.query(n)) / Rational(n);
  a.canonicalize();
  return a.get_den() == 1;
}

double approx(const Rational& q) { return q.get_d(); }

// Sign from the lexicographic definitions, evaluated with doubles for the
// irrational parts (coefficients in tests are small).
int oracle_sign(const Model& m, const GroupElement& x) {
  auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  switch (m.kind()) {
    case Model::Kind::StandardZ:
      return sign(std::get<ZInt>(x).value);
    case Model::Kind::PL: {
      const auto& e = std::get<PLElem>(x);
      std::optional<OrderIndex> top;
      for (auto& [l, q] : e.support)
        if (!top || m.order().less(*top, l)) top = l;
      return top ? sign(e.support.at(*top)) : sign(e.z);
    }
    case Model::Kind::ZAdjoin: {
      auto [c, d] = m.zadjoin_formal(std::get<ZAdjoinElem>(x));
      return c != 0 ? sign(c) : sign(d);
    }
    case Model::Kind::QuadSum: {
      const auto& e = std::get<QuadSumElem>(x);
      if (e.coords.empty()) return sign(e.z);
      auto& [n, c] = *e.coords.rbegin();
      return sgn(approx(c.a) + approx(c.b) * std::sqrt(double(nth_prime(n))));
    }
    case Model::Kind::Cut: {
      const auto& e = std::get<CutElem>(x);
      double alpha = m.alpha().description == "sqrt:2" ? std::sqrt(2.0) : std::sqrt(3.0);
      if (e.a != 0 || e.b != 0) return sgn(approx(e.a) + approx(e.b) * alpha);
      return sign(e.z);
    }
  }
  return 0;
}

}  // namespace

TEST_CASE("group axioms and order compatibility on random elements") {
  std::mt19937_64 rng(2024);
  for (const auto& m : sample_models()) {
    CAPTURE(m.describe());
    for (int i = 0; i < 150; ++i) {
      auto x = m.random_element(rng), y = m.random_element(rng), w = m.random_element(rng);
      CHECK(m.add(x, y) == m.add(y, x));
      CHECK(m.add(m.add(x, y), w) == m.add(x, m.add(y, w)));
      CHECK(m.is_zero(m.add(x, m.neg(x))));
      CHECK(m.add(x, m.zero()) == x);
      CHECK(m.scale(3, x) == m.add(x, m.add(x, x)));
      CHECK(m.sign(m.neg(x)) == -m.sign(x));
      CHECK(m.sign(x) == oracle_sign(m, x));
      if (m.compare(x, y) < 0) CHECK(m.compare(m.add(x, w), m.add(y, w)) < 0);
      if (m.compare(x, y) < 0 && m.compare(y, w) < 0) CHECK(m.compare(x, w) < 0);
      CHECK(m.parse_element(m.format(x)) == x);
    }
  }
}

TEST_CASE("residues split every element of a Presburger group") {
  std::mt19937_64 rng(99);
  for (const auto& m : sample_models()) {
    if (!m.has_integer_part()) continue;
    CAPTURE(m.describe());
    for (int i = 0; i < 60; ++i) {
      auto x = m.random_element(rng), y = m.random_element(rng);
      for (Integer n = 1; n <= 12; ++n) {
        Integer r = m.residue(x, n);
        CHECK(r >= 0);
        CHECK(r < n);
        auto q = m.solve_div(m.sub(x, m.from_integer(r)), n);
        REQUIRE(q.has_value());
        CHECK(m.scale(n, *q) == m.sub(x, m.from_integer(r)));
        CHECK(m.residue(m.add(x, y), n) == mod_floor(r + m.residue(y, n), n));
        if (r != 0) CHECK_FALSE(m.solve_div(x, n).has_value());
      }
    }
  }
}

TEST_CASE("adjoined element residues match the membership criterion") {
  auto r = encode_set({0, 1, 3});
  auto m = Model::zadjoin(r);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto x = std::get<ZAdjoinElem>(m.random_element(rng));
    auto [c, d] = m.zadjoin_formal(x);
    CHECK(formal_member(r, c, d));
    for (Integer k = 2; k <= 10; ++k) {
      Integer got = m.residue(x, k);
      int hits = 0;
      for (Integer t = 0; t < k; ++t) {
        if (formal_member(r, c / Rational(k), (d - Rational(t)) / Rational(k))) {
          ++hits;
          CHECK(t == got);
        }
      }
      CHECK(hits == 1);
    }
  }
  CHECK(m.residue(m.adjoined(), 5) == r.query(5));
}

TEST_CASE("formal coordinates of the adjoined group") {
  auto m = Model::zadjoin(encode_set({0}));
  auto half = m.zadjoin_from_formal(Rational(1, 2), Rational(-1, 2));
  REQUIRE(half.has_value());
  CHECK(m.add(*half, *half) == m.sub(m.adjoined(), m.one()));
  CHECK_FALSE(m.zadjoin_from_formal(Rational(1, 2), 0).has_value());
  CHECK(m.compare(m.adjoined(), m.from_integer(Integer("1000000000000"))) > 0);
}

TEST_CASE("plain decomposition and divisible parts") {
  std::mt19937_64 rng(3);
  for (const auto& m : {Model::pl(OrderPresentation::finite(4)), Model::quadsum(DecidableSet::finite({1})),
                        Model::cut(Irrational::sqrt(2)), Model::zadjoin(residue_of_integer(Integer(-4)))}) {
    for (int i = 0; i < 50; ++i) {
      auto x = m.random_element(rng);
      auto [v, z] = m.decompose_plain(x);
      CHECK(m.in_divisible_part(v));
      CHECK(m.add(v, m.from_integer(z)) == x);
    }
  }
  auto bad = Model::zadjoin(encode_set({0}));
  CHECK_THROWS_AS(bad.decompose_plain(bad.adjoined()), NotPlain);
}

TEST_CASE("scalar multiples by rationals") {
  auto m = Model::pl(OrderPresentation::finite(2));
  auto x = m.parse_element("{l0:3,l1:-1/2}");
  auto y = m.scalar_q(Rational(2, 3), x);
  CHECK(m.scale(3, y) == m.scale(2, x));
  CHECK_THROWS_AS(m.scalar_q(Rational(1, 2), m.one()), NotDivisible);
}

TEST_CASE("coordinates are additive and injective on samples") {
  std::mt19937_64 rng(17);
  for (const auto& m : sample_models()) {
    for (int i = 0; i < 40; ++i) {
      auto x = m.random_element(rng), y = m.random_element(rng);
      auto cx = m.coordinates(x), cy = m.coordinates(y), cs = m.coordinates(m.add(x, y));
      for (auto& [k, v] : cy) cx[k] += v;
      std::erase_if(cx, [](const auto& kv) { return kv.second == 0; });
      CHECK(cx == cs);
      if (x != y) CHECK(m.coordinates(x) != m.coordinates(y));
    }
  }
}

TEST_CASE("tau decomposition recovers the element") {
  auto m = Model::pl(OrderPresentation::zeta());
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    auto p = m.random_element(rng);
    auto tau = tau_decompose(m, p);
    for (std::size_t j = 1; j < tau.indices.size(); ++j) CHECK(m.order().less(tau.indices[j - 1], tau.indices[j]));
    CHECK(t_p(m, tau, tau.indices) == p);
  }
  CHECK(pi_embed(m, 4) == m.parse_element("{l4:1}"));
}

TEST_CASE("quadratic summands compare exactly") {
  auto m = Model::quadsum(DecidableSet::finite({0}));
  // 1393^2 = 1940449 < 2 * 985^2 = 1940450, so 1393 - 985 sqrt 2 < 0.
  CHECK(m.sign(m.parse_element("{0:(1393,-985)};z=1000")) == -1);
  CHECK(m.sign(m.parse_element("{0:(-1393,985)};z=-1000")) == 1);
  CHECK(m.sign(m.parse_element("{0:(1394,-985)};z=-1000")) == 1);
  CHECK_THROWS(m.parse_element("{1:(1,1)}"));
}

TEST_CASE("cut models use the lower cut") {
  auto m = Model::cut(Irrational::sqrt(2));
  CHECK(m.sign(m.parse_element("(-141421356/100000000,1);z=-5")) == 1);
  CHECK(m.sign(m.parse_element("(-141421357/100000000,1);z=5")) == -1);
  CHECK_THROWS(Irrational::sqrt(4));
  CHECK_THROWS(Irrational::parse("cbrt:2"));
}

TEST_CASE("products and divisible parts move between presentations") {
  auto v = Model::vl(OrderPresentation::finite(2));
  auto p = product_with_z(v);
  CHECK(p.has_integer_part());
  CHECK(divisible_part(p).is_divisible());
  CHECK_THROWS_AS(v.one(), NotPlain);
  auto img = quotient_by_standard(p, {p.parse_element("{l1:2};z=7")});
  CHECK(img[0] == v.parse_element("{l1:2}"));
}

TEST_CASE("json model descriptions round trip") {
  for (const auto& m : sample_models()) {
    auto back = model_from_json(to_json(m));
    CHECK(back.describe() == m.describe());
  }
  CHECK_THROWS(model_from_json(nlohmann::json{{"kind", "nope"}}));
}

TEST_CASE("foreign elements are rejected") {
  auto m = Model::pl(OrderPresentation::finite(2));
  CHECK_THROWS_AS(m.check(ZInt{3}), TagMismatch);
  CHECK_THROWS_AS(m.check(PLElem{{{5, Rational(1)}}, 0}), TagMismatch);
  CHECK_FALSE(m.accepts(CutElem{}));
}
