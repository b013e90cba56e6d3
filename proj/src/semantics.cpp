#include "presb/semantics.hpp"

#include <sstream>

#include "presb/arch.hpp"
#include "presb/error.hpp"
#include "presb/qe.hpp"

namespace presb {

namespace {

GroupElement eval_linear(const Model& m, const LinearTerm& t, const Environment& env) {
  GroupElement acc = m.zero();
  for (const auto& [v, k] : t.coeffs) {
    auto it = env.find(v);
    if (it == env.end()) throw UnboundVariable("no value for '" + v + "'");
    acc = m.add(acc, m.scale(k, it->second));
  }
  if (t.constant != 0) acc = m.add(acc, m.from_integer(t.constant));
  return acc;
}

bool star_less(const Model& m, const GroupElement& a, const GroupElement& b) {
  if (m.sign(b) <= 0) return false;
  if (m.sign(a) <= 0) return true;
  return arch_compare(m, a, b) == ArchRelation::MuchLess;
}

bool star_equiv(const Model& m, const GroupElement& a, const GroupElement& b) {
  int sa = m.sign(a), sb = m.sign(b);
  if (sa < 0 && sb < 0) return true;
  if (sa > 0 && sb > 0) return arch_compare(m, a, b) == ArchRelation::Equiv;
  return false;
}

bool eval_atom(const Model& m, const FormulaPtr& f, const Environment& env) {
  switch (f->kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Divides:
      return m.residue(eval_term(m, f->lhs, env), f->modulus) == 0;
    case Formula::Kind::Fin:
      return bounded_by_integer(m, eval_term(m, f->lhs, env));
    case Formula::Kind::Atom:
      break;
    default:
      throw std::logic_error("not an atom");
  }
  if (f->rel == Rel::StarLt || f->rel == Rel::StarEq) {
    auto a = eval_term(m, f->lhs, env);
    auto b = eval_term(m, f->rhs, env);
    return f->rel == Rel::StarLt ? star_less(m, a, b) : star_equiv(m, a, b);
  }
  int s = m.sign(eval_linear(m, linearize(f->lhs) - linearize(f->rhs), env));
  switch (f->rel) {
    case Rel::Lt:
      return s < 0;
    case Rel::Le:
      return s <= 0;
    case Rel::Eq:
      return s == 0;
    case Rel::Ne:
      return s != 0;
    case Rel::Gt:
      return s > 0;
    case Rel::Ge:
      return s >= 0;
    default:
      break;
  }
  return false;
}

template <class Quant>
bool eval_connectives(const FormulaPtr& f, const Quant& rec) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return !rec(f->args[0]);
    case Formula::Kind::And:
      for (const auto& a : f->args) {
        if (!rec(a)) return false;
      }
      return true;
    case Formula::Kind::Or:
      for (const auto& a : f->args) {
        if (rec(a)) return true;
      }
      return false;
    default:
      throw std::logic_error("not a connective");
  }
}

bool is_connective(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Not || f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or;
}

bool is_quantifier(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall;
}

void collect_all_names(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->op == Term::Op::Var) out.insert(t->name);
  collect_all_names(t->left, out);
  collect_all_names(t->right, out);
}

void collect_all_names(const FormulaPtr& f, std::set<std::string>& out) {
  collect_all_names(f->lhs, out);
  collect_all_names(f->rhs, out);
  if (!f->var.empty()) out.insert(f->var);
  for (const auto& a : f->args) collect_all_names(a, out);
}

// Rational linear form over variable names.
struct RationalForm {
  std::map<std::string, Rational> coeffs;
  Rational constant = 0;
};

RationalForm sharp_form(const LinearTerm& t, const std::string& var, const RationalForm& by) {
  RationalForm out;
  for (const auto& [v, k] : t.coeffs) {
    if (v == var) continue;
    out.coeffs[v] += k;
  }
  out.constant = t.constant;
  Integer k = t.coeff(var);
  for (const auto& [v, q] : by.coeffs) out.coeffs[v] += q * k;
  out.constant += by.constant * k;
  return out;
}

Integer denominator_lcm(const RationalForm& f, Integer acc) {
  for (const auto& [v, q] : f.coeffs) acc = lcm(acc, q.get_den());
  return lcm(acc, f.constant.get_den());
}

TermPtr scaled_term(const RationalForm& f, const Integer& scale) {
  LinearTerm out;
  for (const auto& [v, q] : f.coeffs) {
    Rational s = q * scale;
    if (s != 0) out.coeffs[v] = s.get_num();
  }
  out.constant = Rational(f.constant * scale).get_num();
  return to_term(out);
}

FormulaPtr sharp(const FormulaPtr& f, const std::string& var, const RationalForm& by) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom: {
      LinearTerm l = linearize(f->lhs), r = linearize(f->rhs);
      if (l.coeff(var) == 0 && r.coeff(var) == 0) return f;
      auto lf = sharp_form(l, var, by), rf = sharp_form(r, var, by);
      Integer d = denominator_lcm(rf, denominator_lcm(lf, 1));
      return Formula::atom(f->rel, scaled_term(lf, d), scaled_term(rf, d));
    }
    case Formula::Kind::Divides:
    case Formula::Kind::Fin: {
      LinearTerm t = linearize(f->lhs);
      if (t.coeff(var) == 0) return f;
      auto tf = sharp_form(t, var, by);
      Integer d = denominator_lcm(tf, 1);
      if (f->kind == Formula::Kind::Fin) return Formula::fin(scaled_term(tf, d));
      return Formula::divides(f->modulus * d, scaled_term(tf, d));
    }
    case Formula::Kind::Not:
      return Formula::negate(sharp(f->args[0], var, by));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& a : f->args) parts.push_back(sharp(a, var, by));
      return f->kind == Formula::Kind::And ? Formula::conj(parts) : Formula::disj(parts);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (f->var == var) return f;
      auto body = sharp(f->args[0], var, by);
      return f->kind == Formula::Kind::Exists ? Formula::exists(f->var, body) : Formula::forall(f->var, body);
    }
  }
  return f;
}

TermPtr order_variable(const TermPtr& t) {
  if (t->op != Term::Op::Var) throw PreconditionViolated("order atoms compare variables, got '" + print(t) + "'");
  return t;
}

Cardinality classes_between(const Model& m, const GroupElement& x, const GroupElement& y) {
  auto tx = tau_decompose(m, x);
  auto ty = tau_decompose(m, y);
  OrderIndex ly = ty.indices.back();
  if (tx.indices.empty()) {
    std::vector<OrderIndex> tuple{ly};
    return m.order().intervals(tuple)[0];
  }
  std::vector<OrderIndex> tuple{tx.indices.back(), ly};
  return m.order().intervals(tuple)[1];
}

GroupElement abs_value(const Model& m, const GroupElement& x) { return m.sign(x) < 0 ? m.neg(x) : x; }

// The rational q making x - q*y drop to a smaller class, read off the leading
// coordinates of two equivalent residue-free elements; nullopt when the
// leading parts are not rational multiples of each other.
std::optional<Rational> leading_ratio(const Model& m, const GroupElement& x, const GroupElement& y) {
  auto ratio2 = [](const Rational& a1, const Rational& b1, const Rational& a2, const Rational& b2)
      -> std::optional<Rational> {
    if (a1 * b2 != a2 * b1) return std::nullopt;
    return a2 != 0 ? a1 / a2 : b1 / b2;
  };
  switch (m.kind()) {
    case Model::Kind::PL: {
      auto tx = tau_decompose(m, x), ty = tau_decompose(m, y);
      if (tx.indices.empty() || ty.indices.empty() || tx.indices.back() != ty.indices.back()) return std::nullopt;
      return tx.coefficients.back() / ty.coefficients.back();
    }
    case Model::Kind::ZAdjoin: {
      auto cx = m.zadjoin_formal(std::get<ZAdjoinElem>(x)).first, cy = m.zadjoin_formal(std::get<ZAdjoinElem>(y)).first;
      if (cy == 0) return std::nullopt;
      return cx / cy;
    }
    case Model::Kind::QuadSum: {
      const auto& ex = std::get<QuadSumElem>(x).coords;
      const auto& ey = std::get<QuadSumElem>(y).coords;
      if (ex.empty() || ey.empty() || ex.rbegin()->first != ey.rbegin()->first) return std::nullopt;
      const auto& cx = ex.rbegin()->second;
      const auto& cy = ey.rbegin()->second;
      return ratio2(cx.a, cx.b, cy.a, cy.b);
    }
    case Model::Kind::Cut: {
      const auto& ex = std::get<CutElem>(x);
      const auto& ey = std::get<CutElem>(y);
      return ratio2(ex.a, ex.b, ey.a, ey.b);
    }
    case Model::Kind::StandardZ:
      break;
  }
  return std::nullopt;
}

}  // namespace

GroupElement eval_term(const Model& m, const TermPtr& t, const Environment& env) {
  return eval_linear(m, linearize(t), env);
}

bool eval_qf(const Model& m, const FormulaPtr& f, const Environment& env) {
  if (is_quantifier(f)) throw PreconditionViolated("eval_qf got a quantified formula");
  if (is_connective(f)) return eval_connectives(f, [&](const FormulaPtr& g) { return eval_qf(m, g, env); });
  return eval_atom(m, f, env);
}

bool eval(const Model& m, const FormulaPtr& f, const Environment& env) {
  if (is_quantifier_free(f)) return eval_qf(m, f, env);
  if (!is_star_free(f)) return eval_star(m, f, env);
  if (m.is_divisible()) throw NotComputable("quantified formulas are evaluated in Presburger groups only");
  return eval_qf(m, eliminate_quantifiers(f), env);
}

bool eval_star(const Model& m, const FormulaPtr& f, const Environment& env) {
  if (m.kind() != Model::Kind::PL || !m.order().is_finite()) {
    throw NotFiniteOrder("starred evaluation needs P_L over a finite order, got " + m.describe());
  }
  if (is_connective(f)) return eval_connectives(f, [&](const FormulaPtr& g) { return eval_star(m, g, env); });
  if (!is_quantifier(f)) return eval_atom(m, f, env);
  bool ex = f->kind == Formula::Kind::Exists;
  Environment inner = env;
  for (OrderIndex l : m.order().elements()) {
    inner[f->var] = pi_embed(m, l);
    if (eval_star(m, f->args[0], inner) == ex) return ex;
  }
  return !ex;
}

SharpResult substitute_sharp(const FormulaPtr& f, const std::string& var, const TauDecomposition& p) {
  std::set<std::string> used;
  collect_all_names(f, used);
  SharpResult out;
  RationalForm by;
  by.constant = p.z;
  int next = 1;
  for (const auto& q : p.coefficients) {
    std::string name;
    do {
      name = var + std::to_string(next++);
    } while (used.count(name));
    out.vars.push_back(name);
    by.coeffs[name] = q;
  }
  out.formula = sharp(f, var, by);
  return out;
}

FormulaPtr translate_star(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom: {
      auto a = order_variable(f->lhs);
      auto b = order_variable(f->rhs);
      switch (f->rel) {
        case Rel::Lt:
          return Formula::atom(Rel::StarLt, a, b);
        case Rel::Gt:
          return Formula::atom(Rel::StarLt, b, a);
        case Rel::Eq:
          return Formula::atom(Rel::StarEq, a, b);
        case Rel::Ne:
          return Formula::negate(Formula::atom(Rel::StarEq, a, b));
        case Rel::Le:
          return Formula::disj({Formula::atom(Rel::StarLt, a, b), Formula::atom(Rel::StarEq, a, b)});
        case Rel::Ge:
          return Formula::disj({Formula::atom(Rel::StarLt, b, a), Formula::atom(Rel::StarEq, a, b)});
        default:
          throw PreconditionViolated("formula is already starred");
      }
    }
    case Formula::Kind::Divides:
    case Formula::Kind::Fin:
      throw PreconditionViolated("not a formula in the language of orders");
    case Formula::Kind::Not:
      return Formula::negate(translate_star(f->args[0]));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& a : f->args) parts.push_back(translate_star(a));
      return f->kind == Formula::Kind::And ? Formula::conj(parts) : Formula::disj(parts);
    }
    case Formula::Kind::Forall: {
      auto y = Term::var(f->var);
      return Formula::forall(f->var, Formula::disj({Formula::fin(y), translate_star(f->args[0])}));
    }
    case Formula::Kind::Exists: {
      auto y = Term::var(f->var);
      return Formula::exists(f->var, Formula::conj({Formula::negate(Formula::fin(y)),
                                                    Formula::atom(Rel::Gt, y, Term::constant(0)),
                                                    translate_star(f->args[0])}));
    }
  }
  return f;
}

bool phi_n_between(const Model& m, std::uint64_t n, const GroupElement& x, const GroupElement& y) {
  if (m.kind() != Model::Kind::PL) throw TagMismatch("phi_n_between needs a P_L model, got " + m.describe());
  if (m.sign(x) <= 0 || m.sign(y) <= 0) throw NonPositive("phi_n_between needs positive arguments");
  if (arch_compare(m, x, y) != ArchRelation::MuchLess) return false;
  return classes_between(m, x, y) >= Cardinality::finite(n);
}

AxiomReport check_pr_plain_psi(const Model& m, const std::vector<GroupElement>& sample, std::uint64_t bound) {
  AxiomReport report;
  if (m.is_divisible()) {
    report.pr = report.plain = report.plain_certified = false;
    report.notes.push_back(m.describe() + " has no 1; it is not a Presburger group");
    return report;
  }
  auto big = [](std::uint64_t n) { return Integer(static_cast<unsigned long>(n)); };

  for (const auto& x : sample) {
    for (std::uint64_t n = 1; n <= bound && report.pr; ++n) {
      int hits = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        GroupElement target = m.sub(x, m.from_integer(big(i)));
        auto y = m.solve_div(target, big(n));
        if (y && m.scale(big(n), *y) == target) ++hits;
      }
      if (hits != 1) {
        report.pr = false;
        report.notes.push_back("Pr: " + m.format(x) + " has " + std::to_string(hits) + " remainders mod " +
                               std::to_string(n));
      }
    }
  }

  Integer period = lcm_upto(bound);
  for (const auto& x : sample) {
    Integer z = m.residue(x, period);
    for (std::uint64_t n = 1; n <= bound; ++n) {
      if (m.residue(x, big(n)) != mod_floor(z, big(n))) {
        report.plain = false;
        report.notes.push_back("Plain: residues of " + m.format(x) + " are incoherent at " + std::to_string(n));
      }
    }
    try {
      auto [v, zi] = m.decompose_plain(x);
      if (mod_floor(zi, period) != z || !m.in_divisible_part(v)) {
        report.plain = false;
        report.notes.push_back("Plain: decomposition of " + m.format(x) + " disagrees with its residues");
      }
    } catch (const NotPlain&) {
      if (report.plain_certified) {
        report.notes.push_back("Plain: bounded check only; residues up to " + std::to_string(bound) +
                               " match integers z = " + z.get_str() + " mod " + period.get_str() +
                               " but a finite bound cannot refute non-plainness");
      }
      report.plain_certified = false;
    }
  }

  std::vector<GroupElement> pool;
  for (const auto& x : sample) {
    if (!m.is_zero(x) && m.in_divisible_part(x)) pool.push_back(abs_value(m, x));
  }
  for (std::size_t i = 0; i < pool.size() && report.psi; ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (arch_compare(m, pool[i], pool[j]) != ArchRelation::Equiv) continue;
      auto q = leading_ratio(m, pool[i], pool[j]);
      bool ok = false;
      if (q && *q > 0) {
        auto rest = m.sub(pool[i], m.scalar_q(*q, pool[j]));
        ok = m.is_zero(rest) || arch_compare(m, rest, pool[i]) == ArchRelation::MuchLess;
      }
      if (!ok) {
        report.psi = false;
        report.psi_counterexample = std::make_pair(pool[i], pool[j]);
        report.notes.push_back("Psi: " + m.format(pool[i]) + " and " + m.format(pool[j]) +
                               " are archimedean equivalent but n|x| - m|y| stays in their class for all n, m");
        break;
      }
    }
  }
  return report;
}

}  // namespace presb
