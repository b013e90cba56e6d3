#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "presb/diagram.hpp"
#include "presb/error.hpp"

using namespace presb;

TEST_CASE("facts parse and print") {
  CHECK(parse_fact("x0=0") == DiagramFact::zero("x0"));
  CHECK(parse_fact(" x1 < x2 ") == DiagramFact::less("x1", "x2"));
  CHECK(parse_fact("x1+x2=x3") == DiagramFact::sum("x1", "x2", "x3"));
  CHECK(to_string(DiagramFact::sum("a", "b", "c")) == "a+b=c");
  CHECK_THROWS_AS(parse_fact("x1 > x2"), SyntaxError);
  CHECK_THROWS_AS(parse_fact("x1+x2"), SyntaxError);
}

TEST_CASE("zero queries settle at the zero fact") {
  auto s = stream_of({DiagramFact::less("x1", "x2"), DiagramFact::zero("x0"), DiagramFact::less("x0", "x3")});
  auto a = complete_diagram(s, DiagramFact::zero("x3"), 10);
  CHECK_FALSE(a.value);
  CHECK(a.steps == 2);
}

TEST_CASE("sum queries compare the enumerated result") {
  auto s = stream_of({DiagramFact::sum("x1", "x1", "x5")});
  CHECK_FALSE(complete_diagram(s, DiagramFact::sum("x1", "x1", "x2"), 10).value);
  auto t = stream_of({DiagramFact::sum("x2", "x1", "x4")});
  CHECK(complete_diagram(t, DiagramFact::sum("x1", "x2", "x4"), 10).value);
}

TEST_CASE("streams that never decide diverge") {
  auto s = stream_of({DiagramFact::less("x1", "x2")});
  CHECK_THROWS_AS(complete_diagram(s, DiagramFact::less("x3", "x4"), 10), Diverges);
  std::size_t i = 0;
  FactStream endless = [&]() -> std::optional<DiagramFact> { return DiagramFact::less("a" + std::to_string(i++), "b"); };
  CHECK_THROWS_AS(complete_diagram(endless, DiagramFact::zero("q"), 50), Diverges);
}

TEST_CASE("answers match the generating group") {
  std::mt19937_64 rng(12);
  auto m = Model::vl(OrderPresentation::finite(3));
  for (int trial = 0; trial < 5; ++trial) {
    auto d = oracle::random_diagram(m, rng, 8, 200);
    std::size_t n = d.names.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto a = complete_diagram(stream_of(d.facts), DiagramFact::less(d.names[i], d.names[j]), 1000);
        CHECK(a.value == (m.compare(d.values[i], d.values[j]) < 0));
        CHECK(a.steps <= d.facts.size());
      }
  }
}
