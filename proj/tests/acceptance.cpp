// Acceptance checks: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "presb/arch.hpp"
#include "presb/bfgames.hpp"
#include "presb/diagram.hpp"
#include "presb/error.hpp"
#include "presb/semantics.hpp"

using namespace presb;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << why << "; ";
    pass = false;
  }
};

std::set<std::uint64_t> random_set(std::mt19937_64& rng, std::uint64_t max, int density) {
  std::set<std::uint64_t> s;
  for (std::uint64_t k = 0; k <= max; ++k)
    if (static_cast<int>(rng() % 100) < density) s.insert(k);
  return s;
}

void crt_codec(Outcome& o) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto s = random_set(rng, 40, static_cast<int>(rng() % 100));
    if (decode_set(encode_set(s), 40) != s) o.fail("round trip failed");
  }
  if (encode_set({0}).query(6) != 3) o.fail("encode_set({0}).query(6) != 3");
  if (!check_coherence(encode_set({0, 5, 17}), 200).coherent) o.fail("coherence failed");
  o.detail << "100 round trips, r_6 = 3, coherent to 200";
}

void qe_soundness(Outcome& o) {
  oracle::SentenceGen gen(2, 3, 4, 6);
  int disagreements = 0, truths = 0;
  std::size_t window = 0;
  for (int i = 0; i < 200; ++i) {
    auto f = gen.sentence();
    bool decided = decide_sentence(f);
    oracle::BruteZ brute;
    std::map<std::string, Integer> env;
    bool expected = brute.eval(f, env);
    window += brute.window_total();
    truths += decided;
    if (decided != expected) {
      ++disagreements;
      o.fail("disagreement on " + print(f));
    }
  }
  o.detail << "200 sentences, " << truths << " true, " << disagreements << " disagreements, " << window
           << " witness candidates";
}

void division_axioms(Outcome& o) {
  std::mt19937_64 rng(3);
  std::vector<Model> models{Model::pl(OrderPresentation::finite(3)), Model::zadjoin(encode_set({0, 3})),
                            Model::quadsum(DecidableSet::finite({1}))};
  for (const auto& m : models) {
    for (int s = 0; s < 50; ++s) {
      auto x = m.random_element(rng);
      for (Integer n = 1; n <= 20; ++n) {
        int hits = 0;
        for (Integer i = 0; i < n; ++i) {
          auto shifted = m.sub(x, m.from_integer(i));
          auto y = m.solve_div(shifted, n);
          if (!y) continue;
          ++hits;
          if (m.scale(n, *y) != shifted) o.fail("n*y != x-i in " + m.describe());
        }
        if (hits != 1) o.fail("not exactly one remainder for " + m.format(x) + " in " + m.describe());
      }
    }
  }
  o.detail << "3 models x 50 elements x n <= 20";
}

// (a1, z1, n) ~ (a2, z2, m) by the defining equations.
bool related(const ResidueSequence& r, const Integer& a1, const Integer& z1, const Integer& n, const Integer& a2,
             const Integer& z2, const Integer& m) {
  return m * z1 == n * z2 && n * m * a1 - m * r.query(n) * z1 == n * m * a2 - n * r.query(m) * z2;
}

void adjoin_consistency(Outcome& o) {
  auto r = encode_set({0});
  auto model = Model::zadjoin(r);
  struct Triple {
    Integer a, z, n;
  };
  std::vector<Triple> all;
  for (int a = -3; a <= 3; ++a)
    for (int z = -3; z <= 3; ++z)
      for (int n = 1; n <= 4; ++n) all.push_back({a, z, n});
  std::size_t pairs = 0;
  for (const auto& s : all) {
    auto cs = model.zadjoin_canonical(s.a, s.z, s.n);
    if (!related(r, s.a, s.z, s.n, cs.a, cs.z, cs.n)) o.fail("canonical form not equivalent");
    for (const auto& t : all) {
      auto ct = model.zadjoin_canonical(t.a, t.z, t.n);
      ++pairs;
      if (related(r, s.a, s.z, s.n, t.a, t.z, t.n) != (cs == ct)) o.fail("~ disagrees with canonical equality");
      // sum by the addition formula on the raw triples
      Integer nm = s.n * t.n;
      Integer a = s.a + t.a + (r.query(nm) - r.query(s.n)) / s.n * s.z + (r.query(nm) - r.query(t.n)) / t.n * t.z;
      Integer z = t.n * s.z + s.n * t.z;
      auto sum = std::get<ZAdjoinElem>(model.add(cs, ct));
      if (!related(r, a, z, nm, sum.a, sum.z, sum.n)) o.fail("addition formula disagrees with add");
    }
    auto h = GroupElement(cs);
    if (model.add(h, h) != model.scale(2, h)) o.fail("h + h != 2h");
  }
  o.detail << pairs << " pairs";
}

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

void back_and_forth(Outcome& o) {
  std::size_t cases = 0;
  for (std::uint64_t na = 0; na <= 5; ++na)
    for (std::uint64_t nb = 0; nb <= 5; ++nb) {
      auto a = OrderPresentation::finite(na), b = OrderPresentation::finite(nb);
      for (const auto& ta : ascending_tuples(na, 2))
        for (const auto& tb : ascending_tuples(nb, 2)) {
          if (ta.size() != tb.size()) continue;
          ++cases;
          if (leq_one(a, ta, b, tb) != leq_one_bruteforce(a, ta, b, tb)) o.fail("level one disagrees with oracle");
        }
    }
  std::mt19937_64 rng(5);
  GameSolver solver;
  for (int i = 0; i < 50; ++i) {
    std::uint64_t na = rng() % 5, nb = rng() % 5;
    std::size_t len = std::min<std::uint64_t>({na, nb, rng() % 3});
    auto pick = [&](std::uint64_t n) {
      auto all = ascending_tuples(n, len);
      std::erase_if(all, [&](const Tuple& t) { return t.size() != len; });
      return all[rng() % all.size()];
    };
    auto a = OrderPresentation::finite(na), b = OrderPresentation::finite(nb);
    auto ta = pick(na), tb = pick(nb);
    bool prev = true;
    for (int alpha = 1; alpha <= 3; ++alpha) {
      if (!solver.leq_alpha(a, ta, a, ta, alpha)) o.fail("not reflexive");
      bool now = solver.leq_alpha(a, ta, b, tb, alpha);
      if (now && !prev) o.fail("not monotone in alpha");
      prev = now;
    }
  }
  o.detail << cases << " exhaustive level-one cases, 50 random positions at levels 1..3";
}

void translation(Outcome& o) {
  std::size_t checks = 0;
  for (std::uint64_t n = 0; n <= 6; ++n) {
    auto m = Model::pl(OrderPresentation::finite(n));
    for (const auto& s : oracle::order_corpus()) {
      auto f = parse_formula(s);
      ++checks;
      if (eval_star(m, translate_star(f)) != oracle::eval_finite_order(f, n))
        o.fail("disagreement on '" + s + "' with |L| = " + std::to_string(n));
    }
  }
  o.detail << checks << " (order, sentence) pairs";
}

FormulaPtr random_qf(std::mt19937_64& rng, int atoms) {
  static const char* shapes[] = {"x > {c}",       "x < {c}",        "{k}*x + {c} = 0", "{m} | x + {c}",
                                 "{m} | {k}*x",   "x != {c}",       "{k}*x >= {c}",    "~({m} | x)"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<FormulaPtr> parts;
  for (int i = 0; i < atoms; ++i) {
    std::string s = shapes[pick(0, 7)];
    auto put = [&](const std::string& key, int v) {
      auto at = s.find(key);
      if (at != std::string::npos) s.replace(at, key.size(), v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v));
    };
    put("{c}", pick(-5, 5));
    put("{k}", pick(1, 4));
    put("{m}", pick(2, 6));
    parts.push_back(parse_formula(s));
  }
  return pick(0, 1) ? Formula::conj(parts) : Formula::disj(parts);
}

void sharp(Outcome& o) {
  std::mt19937_64 rng(7);
  auto m = Model::pl(OrderPresentation::finite(4));
  int quantified = 0;
  for (int i = 0; i < 100; ++i) {
    FormulaPtr phi = random_qf(rng, 1 + static_cast<int>(rng() % 3));
    if (i % 4 == 0) {
      phi = Formula::conj({phi, parse_formula("E y. 2*y = x + 1 or 3*y = x")});
      ++quantified;
    }
    auto p = m.random_element(rng);
    auto tau = tau_decompose(m, p);
    auto s = substitute_sharp(phi, "x", tau);
    Environment env;
    for (std::size_t j = 0; j < s.vars.size(); ++j) env[s.vars[j]] = pi_embed(m, tau.indices[j]);
    if (eval(m, phi, {{"x", p}}) != eval(m, s.formula, env)) o.fail("mismatch on " + print(phi) + " at " + m.format(p));
    if (quantifier_depth(s.formula) != quantifier_depth(phi)) o.fail("quantifier depth changed");
  }
  o.detail << "100 pairs, " << quantified << " with a quantifier";
}

struct IsoCase {
  Model src, dst;
  GroupElement basis_dst;
};

void check_iso(Outcome& o, const IsoCase& c, std::mt19937_64& rng) {
  std::vector<GroupElement> probes;
  for (int i = 0; i < 100; ++i) probes.push_back(c.src.random_element(rng));
  for (int i = 0; i + 1 < 100; i += 2) probes.push_back(c.src.add(probes[i], probes[i + 1]));
  auto graph = build_isomorphism(c.src, c.dst, {c.src.adjoined()}, {c.basis_dst}, probes);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& [p, fp] = graph[i];
    for (std::uint64_t n = 1; n <= 30; ++n)
      if (c.src.residue(p, n) != c.dst.residue(fp, n)) o.fail("residue not preserved");
    for (std::size_t j = 0; j < 100; ++j)
      if (c.src.compare(p, graph[j].first) != c.dst.compare(fp, graph[j].second)) o.fail("order not preserved");
  }
  for (std::size_t i = 0; i + 1 < 100; i += 2)
    if (graph[100 + i / 2].second != c.dst.add(graph[i].second, graph[i + 1].second)) o.fail("sum not preserved");
}

void isomorphisms(Outcome& o) {
  std::mt19937_64 rng(8);
  int valid = 0, rejected = 0;
  for (int t = 0; t < 10; ++t) {
    auto s = random_set(rng, 12, 40);
    auto r = encode_set(s);
    auto src = Model::zadjoin(r);
    // the same group presented with X' = X + shift; X' - shift is the image of X
    Integer shift = static_cast<long>(rng() % 1000) - 500;
    auto dst = Model::zadjoin(r.shifted(shift));
    check_iso(o, {src, dst, dst.sub(dst.adjoined(), dst.from_integer(shift))}, rng);
    check_iso(o, {src, src, src.adjoined()}, rng);
    valid += 2;

    IsomorphismOptions bounded{16, 3};
    std::vector<GroupElement> few{src.adjoined()};
    std::vector<GroupElement> wrong_residue{src.add(src.adjoined(), src.one())};
    // 2X differs from X mod n exactly when r_n != 0
    bool visible = false;
    for (std::uint64_t n = 1; n <= 16; ++n) visible = visible || r.query(n) != 0;
    if (visible) wrong_residue.push_back(src.scale(2, src.adjoined()));
    for (const auto& b : wrong_residue) {
      try {
        build_isomorphism(src, src, {src.adjoined()}, {b}, few, bounded);
        o.fail(src.format(b) + " accepted");
      } catch (const ResidueMismatch&) {
        ++rejected;
      }
    }
    // -X + d has the residues of X up to 16 but the opposite cut
    Integer l16 = lcm_upto(16);
    Integer d = mod_floor(2 * r.query(l16), l16);
    try {
      build_isomorphism(src, src, {src.adjoined()}, {src.add(src.neg(src.adjoined()), src.from_integer(d))}, few,
                        bounded);
      o.fail("-X + d accepted");
    } catch (const CutMismatch&) {
      ++rejected;
    }
  }
  o.detail << valid << " valid bases checked on 100 probes, " << rejected << " invalid bases rejected at bound 16";
}

std::vector<double> approx(const Coordinates& c, const std::vector<CoordKey>& keys) {
  std::vector<double> v;
  for (const auto& k : keys) {
    auto it = c.find(k);
    v.push_back(it == c.end() ? 0.0 : it->second.get_d());
  }
  return v;
}

void dependence_equations(Outcome& o) {
  std::mt19937_64 rng(9);
  struct Case {
    Model m;
    std::vector<GroupElement> basis;
  };
  auto za = Model::zadjoin(encode_set({0, 2}));
  auto pl = Model::pl(OrderPresentation::finite(2));
  auto qs = Model::quadsum(DecidableSet::finite({0}));
  std::vector<Case> cases{{za, {za.one(), za.adjoined()}},
                          {pl, {pl.one(), pi_embed(pl, 0), pi_embed(pl, 1)}},
                          {qs, {qs.one(), qs.parse_element("{0:(1,0)}"), qs.parse_element("{0:(0,1)}")}}};
  std::size_t elements = 0, rediscovered = 0;
  for (const auto& c : cases) {
    std::vector<CoordKey> keys;
    for (const auto& b : c.basis)
      for (const auto& [k, v] : c.m.coordinates(b)) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<std::vector<double>> basis_v;
    for (const auto& b : c.basis) basis_v.push_back(approx(c.m.coordinates(b), keys));
    int found = 0;
    while (found < 50) {
      // (sum k_i b_i) / m when that division exists in the model
      std::vector<Integer> ks;
      for (std::size_t i = 0; i < c.basis.size(); ++i) ks.push_back(static_cast<long>(rng() % 11) - 5);
      auto g = combine(c.m, ks, c.basis);
      if (auto q = c.m.solve_div(g, static_cast<long>(1 + rng() % 6))) g = *q;
      if (c.m.is_zero(g)) continue;
      auto eq = dependence(c.m, g, c.basis);
      if (!eq) {
        o.fail("no dependence for " + c.m.format(g));
        break;
      }
      ++found;
      ++elements;
      if (c.m.scale(eq->m, g) != combine(c.m, eq->coeffs, c.basis)) o.fail("m*g != combination");
      Integer gg = eq->m;
      for (const auto& k : eq->coeffs) gg = gcd(gg, k);
      if (gg != 1 || eq->m <= 0) o.fail("not reduced");
      // every (m', k') in the box with m' g = sum k'_i b_i must be eq itself
      auto gv = approx(c.m.coordinates(g), keys);
      std::size_t dim = c.basis.size();
      std::vector<int> k(dim, -10);
      for (int mm = 1; mm <= 10; ++mm) {
        std::fill(k.begin(), k.end(), -10);
        while (true) {
          bool close = true;
          for (std::size_t a = 0; a < keys.size() && close; ++a) {
            double s = mm * gv[a];
            for (std::size_t i = 0; i < dim; ++i) s -= k[i] * basis_v[i][a];
            close = std::abs(s) < 1e-7;
          }
          if (close) {
            std::vector<Integer> ks(k.begin(), k.end());
            Integer h = mm;
            for (const auto& x : ks) h = gcd(h, x);
            bool exact = c.m.scale(mm, g) == combine(c.m, ks, c.basis);
            if (exact && h == 1 && (mm != eq->m || ks != eq->coeffs)) o.fail("second reduced solution");
            if (exact && mm == eq->m && ks == eq->coeffs) ++rediscovered;
          }
          std::size_t i = 0;
          while (i < dim && k[i] == 10) k[i++] = -10;
          if (i == dim) break;
          ++k[i];
        }
      }
    }
  }
  o.detail << elements << " elements over bases of dimension 2 and 3, " << rediscovered
           << " equations found again by the box search";
}

void diagrams(Outcome& o) {
  std::mt19937_64 rng(10);
  std::size_t queries = 0, max_facts = 0;
  std::vector<Model> groups{Model::vl(OrderPresentation::finite(3)), Model::quadsum_divisible(DecidableSet::finite({0})),
                            Model::cut_closure(Irrational::sqrt(2))};
  for (int t = 0; t < 20; ++t) {
    const auto& m = groups[t % groups.size()];
    auto d = oracle::random_diagram(m, rng, 10, 200);
    max_facts = std::max(max_facts, d.facts.size());
    std::size_t n = d.names.size();
    auto ask = [&](const DiagramFact& q, bool truth) {
      ++queries;
      auto a = complete_diagram(stream_of(d.facts), q, d.facts.size() + 1);
      if (a.value != truth) o.fail("wrong answer to " + to_string(q));
      if (a.steps > d.facts.size()) o.fail("too many steps");
    };
    for (std::size_t i = 0; i < n; ++i) {
      ask(DiagramFact::zero(d.names[i]), m.is_zero(d.values[i]));
      for (std::size_t j = 0; j < n; ++j) {
        ask(DiagramFact::less(d.names[i], d.names[j]), m.compare(d.values[i], d.values[j]) < 0);
        auto s = m.add(d.values[i], d.values[j]);
        for (std::size_t k = 0; k < n; ++k) {
          if (d.values[k] != s) continue;
          for (std::size_t c = 0; c < n; ++c) ask(DiagramFact::sum(d.names[i], d.names[j], d.names[c]), c == k);
        }
      }
    }
  }
  o.detail << "20 diagrams (up to " << max_facts << " facts), " << queries << " queries";
}

void axiom_reports(Outcome& o) {
  std::mt19937_64 rng(11);
  for (std::uint64_t k : {1, 2, 3}) {
    auto pl = Model::pl(OrderPresentation::finite(k));
    std::vector<GroupElement> sample;
    for (OrderIndex l = 0; l < k; ++l) {
      sample.push_back(pi_embed(pl, l));
      sample.push_back(pl.scale(3, pi_embed(pl, l)));
    }
    for (int i = 0; i < 40; ++i) sample.push_back(pl.random_element(rng));
    auto r = check_pr_plain_psi(pl, sample, 12);
    if (!(r.pr && r.plain && r.plain_certified && r.psi)) o.fail(pl.describe() + " failed a check");
  }
  auto q = Model::quadsum(DecidableSet::finite({0}));
  auto rq = check_pr_plain_psi(q, {q.parse_element("{0:(1,0)}"), q.parse_element("{0:(0,1)}")}, 12);
  if (rq.psi || !rq.psi_counterexample) o.fail("Psi not refuted on (1, sqrt 2)");
  if (!rq.pr || !rq.plain) o.fail("QuadSum failed Pr or Plain");
  auto za = Model::zadjoin(encode_set({0}));
  auto rz = check_pr_plain_psi(za, {za.adjoined(), za.add(za.adjoined(), za.one())}, 12);
  bool caveat = false;
  for (const auto& n : rz.notes) caveat = caveat || n.find("bounded") != std::string::npos;
  // one-sided: a finite bound cannot refute Plain for X, so it passes uncertified
  if (!rz.plain || rz.plain_certified || !caveat) o.fail("missing bounded caveat for the adjoined group");
  o.detail << "P_L passes, QuadSum fails Psi, adjoined group reported plain only up to the bound";
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"CRT codec", crt_codec},
      {"QE soundness", qe_soundness},
      {"division axioms in nonstandard models", division_axioms},
      {"adjoined element arithmetic", adjoin_consistency},
      {"back-and-forth relations", back_and_forth},
      {"order-to-group translation", translation},
      {"substitution by decomposition", sharp},
      {"isomorphism builder", isomorphisms},
      {"dependence equations", dependence_equations},
      {"diagram completion", diagrams},
      {"Pr / Plain / Psi report", axiom_reports},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail.str()
              << " (" << std::fixed << std::setprecision(2) << secs << "s)" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
