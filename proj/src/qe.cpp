#include "presb/qe.hpp"

#include <algorithm>
#include <tuple>

#include "presb/error.hpp"

namespace presb {

namespace {

// 0 < t, t = 0, t != 0, m | t, not m | t.
struct Lit {
  enum class Kind { Lt, Eq, Ne, Dv, Nd };
  Kind kind = Kind::Lt;
  LinearTerm t;
  Integer m = 1;

  friend bool operator<(const Lit& a, const Lit& b) {
    return std::tie(a.kind, a.t, a.m) < std::tie(b.kind, b.t, b.m);
  }
  friend bool operator==(const Lit& a, const Lit& b) { return a.kind == b.kind && a.t == b.t && a.m == b.m; }
};

struct QF {
  enum class Kind { True, False, Lit, And, Or };
  Kind kind = Kind::True;
  Lit lit;
  std::vector<QF> kids;

  static QF truth(bool v) {
    QF q;
    q.kind = v ? Kind::True : Kind::False;
    return q;
  }
};

Integer content(const LinearTerm& t) {
  Integer g = 0;
  for (const auto& [v, k] : t.coeffs) g = gcd(g, k);
  return g;
}

LinearTerm divide_exact(const LinearTerm& t, const Integer& g) {
  LinearTerm out;
  for (const auto& [v, k] : t.coeffs) out.coeffs[v] = k / g;
  out.constant = t.constant / g;
  return out;
}

QF make_lit(Lit l) {
  using K = Lit::Kind;
  auto& t = l.t;
  switch (l.kind) {
    case K::Lt: {
      if (t.is_constant()) return QF::truth(t.constant > 0);
      Integer g = content(t);
      if (g > 1) {
        Integer c = -floor_div(-t.constant, g);
        t.constant = 0;
        t = divide_exact(t, g);
        t.constant = c;
      }
      break;
    }
    case K::Eq:
    case K::Ne: {
      bool eq = l.kind == K::Eq;
      if (t.is_constant()) return QF::truth((t.constant == 0) == eq);
      Integer g = content(t);
      if (mod_floor(t.constant, g) != 0) return QF::truth(!eq);
      t = divide_exact(t, g);
      if (t.coeffs.begin()->second < 0) t = Integer(-1) * t;
      break;
    }
    case K::Dv:
    case K::Nd: {
      bool dv = l.kind == K::Dv;
      LinearTerm r;
      for (const auto& [v, k] : t.coeffs) {
        Integer c = mod_floor(k, l.m);
        if (c != 0) r.coeffs[v] = c;
      }
      r.constant = mod_floor(t.constant, l.m);
      if (l.m == 1) return QF::truth(dv);
      if (r.is_constant()) return QF::truth((r.constant == 0) == dv);
      Integer g = gcd(gcd(content(r), r.constant), l.m);
      if (g > 1) {
        r = divide_exact(r, g);
        l.m /= g;
        if (l.m == 1) return QF::truth(dv);
      }
      t = r;
      break;
    }
  }
  QF q;
  q.kind = QF::Kind::Lit;
  q.lit = std::move(l);
  return q;
}

QF make_junction(bool is_and, std::vector<QF> parts) {
  QF::Kind unit = is_and ? QF::Kind::True : QF::Kind::False;
  QF::Kind zero = is_and ? QF::Kind::False : QF::Kind::True;
  QF::Kind self = is_and ? QF::Kind::And : QF::Kind::Or;
  std::vector<QF> out;
  std::set<Lit> seen;
  std::function<void(QF&&)> push = [&](QF&& q) {
    if (q.kind == unit) return;
    if (q.kind == self) {
      for (auto& k : q.kids) push(std::move(k));
      return;
    }
    if (q.kind == QF::Kind::Lit && !seen.insert(q.lit).second) return;
    out.push_back(std::move(q));
  };
  for (auto& p : parts) {
    if (p.kind == zero) return QF::truth(!is_and);
    push(std::move(p));
  }
  for (const auto& q : out) {
    if (q.kind == zero) return QF::truth(!is_and);
  }
  if (out.empty()) return QF::truth(is_and);
  if (out.size() == 1) return std::move(out[0]);
  QF q;
  q.kind = self;
  q.kids = std::move(out);
  return q;
}

QF negate(const QF& q) {
  using K = Lit::Kind;
  switch (q.kind) {
    case QF::Kind::True:
      return QF::truth(false);
    case QF::Kind::False:
      return QF::truth(true);
    case QF::Kind::Lit: {
      Lit l = q.lit;
      switch (l.kind) {
        case K::Lt:
          l.t = Integer(-1) * l.t;
          l.t.constant += 1;
          break;
        case K::Eq:
          l.kind = K::Ne;
          break;
        case K::Ne:
          l.kind = K::Eq;
          break;
        case K::Dv:
          l.kind = K::Nd;
          break;
        case K::Nd:
          l.kind = K::Dv;
          break;
      }
      return make_lit(std::move(l));
    }
    case QF::Kind::And:
    case QF::Kind::Or: {
      std::vector<QF> parts;
      for (const auto& k : q.kids) parts.push_back(negate(k));
      return make_junction(q.kind == QF::Kind::Or, std::move(parts));
    }
  }
  return q;
}

template <class F>
QF map_lits(const QF& q, const F& f) {
  switch (q.kind) {
    case QF::Kind::True:
    case QF::Kind::False:
      return q;
    case QF::Kind::Lit:
      return f(q.lit);
    case QF::Kind::And:
    case QF::Kind::Or: {
      std::vector<QF> parts;
      for (const auto& k : q.kids) parts.push_back(map_lits(k, f));
      return make_junction(q.kind == QF::Kind::And, std::move(parts));
    }
  }
  return q;
}

template <class F>
void for_each_lit(const QF& q, const F& f) {
  if (q.kind == QF::Kind::Lit) f(q.lit);
  for (const auto& k : q.kids) for_each_lit(k, f);
}

QF substitute(const QF& q, const std::string& x, const LinearTerm& by) {
  return map_lits(q, [&](const Lit& l) {
    if (l.t.coeff(x) == 0) return make_lit(l);
    Lit out = l;
    out.t = substitute(l.t, x, by);
    return make_lit(std::move(out));
  });
}

QF eliminate_exists(const std::string& x, const QF& phi) {
  using K = Lit::Kind;
  bool mentions = false;
  Integer delta = 1;
  for_each_lit(phi, [&](const Lit& l) {
    Integer c = l.t.coeff(x);
    if (c != 0) {
      mentions = true;
      delta = lcm(delta, abs(c));
    }
  });
  if (!mentions) return phi;

  // Scale every literal so x has coefficient +-delta, then read delta*x as x.
  QF unit = map_lits(phi, [&](const Lit& l) {
    Integer c = l.t.coeff(x);
    if (c == 0) return make_lit(l);
    Integer f = delta / abs(c);
    Lit out = l;
    out.t = f * l.t;
    out.t.coeffs[x] = sign(c);
    if (l.kind == K::Dv || l.kind == K::Nd) out.m = l.m * f;
    if (l.kind != K::Lt && sign(c) < 0) out.t = Integer(-1) * out.t;
    QF q;
    q.kind = QF::Kind::Lit;
    q.lit = out;
    return q;
  });
  if (delta > 1) {
    Lit d;
    d.kind = K::Dv;
    d.m = delta;
    d.t.coeffs[x] = 1;
    QF dq;
    dq.kind = QF::Kind::Lit;
    dq.lit = d;
    unit = make_junction(true, {std::move(unit), std::move(dq)});
  }

  std::set<LinearTerm> lower, upper;
  Integer period = 1;
  for_each_lit(unit, [&](const Lit& l) {
    Integer c = l.t.coeff(x);
    if (c == 0) return;
    LinearTerm s = l.t;
    s.coeffs.erase(x);
    LinearTerm neg_s = Integer(-1) * s;
    switch (l.kind) {
      case K::Lt:
        if (c > 0) {
          lower.insert(neg_s);  // x > -s
        } else {
          upper.insert(s);  // x < s
        }
        break;
      case K::Eq: {
        LinearTerm lo = neg_s, hi = neg_s;
        lo.constant -= 1;
        hi.constant += 1;
        lower.insert(lo);
        upper.insert(hi);
        break;
      }
      case K::Ne:
        lower.insert(neg_s);
        upper.insert(neg_s);
        break;
      case K::Dv:
      case K::Nd:
        period = lcm(period, l.m);
        break;
    }
  });

  bool from_below = lower.size() <= upper.size();
  QF at_infinity = map_lits(unit, [&](const Lit& l) {
    Integer c = l.t.coeff(x);
    if (c == 0 || l.kind == K::Dv || l.kind == K::Nd) {
      QF q;
      q.kind = QF::Kind::Lit;
      q.lit = l;
      return q;
    }
    switch (l.kind) {
      case K::Lt:
        return QF::truth((c > 0) != from_below);
      case K::Eq:
        return QF::truth(false);
      default:
        return QF::truth(true);
    }
  });

  std::vector<QF> cases;
  const auto& bounds = from_below ? lower : upper;
  for (Integer j = 1; j <= period; ++j) {
    LinearTerm at;
    at.constant = from_below ? j : Integer(-j);
    cases.push_back(substitute(at_infinity, x, at));
    if (cases.back().kind == QF::Kind::True) return QF::truth(true);
    for (const auto& b : bounds) {
      LinearTerm point = b;
      point.constant += from_below ? j : Integer(-j);
      cases.push_back(substitute(unit, x, point));
      if (cases.back().kind == QF::Kind::True) return QF::truth(true);
    }
  }
  return make_junction(false, std::move(cases));
}

Lit relation_lit(Rel rel, const LinearTerm& lhs, const LinearTerm& rhs) {
  Lit l;
  switch (rel) {
    case Rel::Lt:
      l.kind = Lit::Kind::Lt;
      l.t = rhs - lhs;
      break;
    case Rel::Le:
      l.kind = Lit::Kind::Lt;
      l.t = rhs - lhs;
      l.t.constant += 1;
      break;
    case Rel::Gt:
      l.kind = Lit::Kind::Lt;
      l.t = lhs - rhs;
      break;
    case Rel::Ge:
      l.kind = Lit::Kind::Lt;
      l.t = lhs - rhs;
      l.t.constant += 1;
      break;
    case Rel::Eq:
      l.kind = Lit::Kind::Eq;
      l.t = lhs - rhs;
      break;
    case Rel::Ne:
      l.kind = Lit::Kind::Ne;
      l.t = lhs - rhs;
      break;
    case Rel::StarLt:
    case Rel::StarEq:
      throw PreconditionViolated("starred atoms have no quantifier elimination");
  }
  return l;
}

QF to_qf(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
      return QF::truth(true);
    case Formula::Kind::False:
      return QF::truth(false);
    case Formula::Kind::Atom:
      return make_lit(relation_lit(f->rel, linearize(f->lhs), linearize(f->rhs)));
    case Formula::Kind::Divides: {
      Lit l;
      l.kind = Lit::Kind::Dv;
      l.m = f->modulus;
      l.t = linearize(f->lhs);
      return make_lit(std::move(l));
    }
    case Formula::Kind::Fin:
      throw PreconditionViolated("fin() has no quantifier elimination");
    case Formula::Kind::Not:
      return negate(to_qf(f->args[0]));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<QF> parts;
      for (const auto& a : f->args) parts.push_back(to_qf(a));
      return make_junction(f->kind == Formula::Kind::And, std::move(parts));
    }
    case Formula::Kind::Exists:
      return eliminate_exists(f->var, to_qf(f->args[0]));
    case Formula::Kind::Forall:
      return negate(eliminate_exists(f->var, negate(to_qf(f->args[0]))));
  }
  return QF::truth(true);
}

// 0 < t as "N < P" with both sides free of negative coefficients.
std::pair<TermPtr, TermPtr> split_sides(const LinearTerm& t) {
  LinearTerm pos, neg;
  for (const auto& [v, k] : t.coeffs) {
    if (k > 0) {
      pos.coeffs[v] = k;
    } else {
      neg.coeffs[v] = -k;
    }
  }
  if (t.constant > 0) pos.constant = t.constant;
  if (t.constant < 0) neg.constant = -t.constant;
  return {to_term(neg), to_term(pos)};
}

FormulaPtr from_qf(const QF& q) {
  switch (q.kind) {
    case QF::Kind::True:
      return Formula::truth(true);
    case QF::Kind::False:
      return Formula::truth(false);
    case QF::Kind::Lit: {
      const auto& l = q.lit;
      switch (l.kind) {
        case Lit::Kind::Lt: {
          auto [a, b] = split_sides(l.t);
          return Formula::atom(Rel::Lt, a, b);
        }
        case Lit::Kind::Eq:
        case Lit::Kind::Ne: {
          auto [a, b] = split_sides(l.t);
          return Formula::atom(l.kind == Lit::Kind::Eq ? Rel::Eq : Rel::Ne, a, b);
        }
        case Lit::Kind::Dv:
          return Formula::divides(l.m, to_term(l.t));
        case Lit::Kind::Nd:
          return Formula::negate(Formula::divides(l.m, to_term(l.t)));
      }
      break;
    }
    case QF::Kind::And:
    case QF::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& k : q.kids) parts.push_back(from_qf(k));
      return q.kind == QF::Kind::And ? Formula::conj(parts) : Formula::disj(parts);
    }
  }
  return Formula::truth(true);
}

}  // namespace

FormulaPtr eliminate_quantifiers(const FormulaPtr& f) { return from_qf(to_qf(f)); }

FormulaPtr simplify(const FormulaPtr& f) {
  if (!is_quantifier_free(f)) throw PreconditionViolated("simplify expects a quantifier-free formula");
  return from_qf(to_qf(f));
}

bool decide_sentence(const FormulaPtr& f) {
  auto free = free_variables(f);
  if (!free.empty()) throw PreconditionViolated("sentence has free variable '" + *free.begin() + "'");
  QF q = to_qf(f);
  if (q.kind == QF::Kind::True) return true;
  if (q.kind == QF::Kind::False) return false;
  throw std::logic_error("closed formula did not reduce to a constant");
}

}  // namespace presb
