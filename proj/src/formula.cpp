#include "presb/formula.hpp"

#include <cctype>
#include <functional>
#include <sstream>

#include "presb/error.hpp"

namespace presb {

TermPtr Term::var(std::string name) {
  auto t = std::make_shared<Term>();
  t->op = Op::Var;
  t->name = std::move(name);
  return t;
}

TermPtr Term::constant(Integer v) {
  auto t = std::make_shared<Term>();
  t->op = Op::Const;
  t->value = std::move(v);
  return t;
}

TermPtr Term::add(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->op = Op::Add;
  t->left = std::move(a);
  t->right = std::move(b);
  return t;
}

TermPtr Term::sub(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->op = Op::Sub;
  t->left = std::move(a);
  t->right = std::move(b);
  return t;
}

TermPtr Term::neg(TermPtr a) {
  auto t = std::make_shared<Term>();
  t->op = Op::Neg;
  t->left = std::move(a);
  return t;
}

TermPtr Term::scale(Integer k, TermPtr a) {
  auto t = std::make_shared<Term>();
  t->op = Op::Scale;
  t->value = std::move(k);
  t->left = std::move(a);
  return t;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Term::Op::Var:
      return a->name == b->name;
    case Term::Op::Const:
      return a->value == b->value;
    case Term::Op::Add:
    case Term::Op::Sub:
      return equal(a->left, b->left) && equal(a->right, b->right);
    case Term::Op::Neg:
      return equal(a->left, b->left);
    case Term::Op::Scale:
      return a->value == b->value && equal(a->left, b->left);
  }
  return false;
}

std::string to_string(Rel r) {
  switch (r) {
    case Rel::Lt:
      return "<";
    case Rel::Le:
      return "<=";
    case Rel::Eq:
      return "=";
    case Rel::Ne:
      return "!=";
    case Rel::Gt:
      return ">";
    case Rel::Ge:
      return ">=";
    case Rel::StarLt:
      return "<*";
    case Rel::StarEq:
      return "=*";
  }
  return "?";
}

namespace {

std::shared_ptr<Formula> make(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

}  // namespace

FormulaPtr Formula::truth(bool value) { return make(value ? Kind::True : Kind::False); }

FormulaPtr Formula::atom(Rel rel, TermPtr lhs, TermPtr rhs) {
  auto f = make(Kind::Atom);
  f->rel = rel;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

FormulaPtr Formula::divides(Integer n, TermPtr t) {
  if (n <= 0) throw std::invalid_argument("divisibility modulus must be positive");
  auto f = make(Kind::Divides);
  f->modulus = std::move(n);
  f->lhs = std::move(t);
  return f;
}

FormulaPtr Formula::fin(TermPtr t) {
  auto f = make(Kind::Fin);
  f->lhs = std::move(t);
  return f;
}

FormulaPtr Formula::negate(FormulaPtr g) {
  auto f = make(Kind::Not);
  f->args = {std::move(g)};
  return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
  if (fs.empty()) return truth(true);
  if (fs.size() == 1) return fs[0];
  auto f = make(Kind::And);
  f->args = std::move(fs);
  return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
  if (fs.empty()) return truth(false);
  if (fs.size() == 1) return fs[0];
  auto f = make(Kind::Or);
  f->args = std::move(fs);
  return f;
}

FormulaPtr Formula::exists(std::string var, FormulaPtr body) {
  auto f = make(Kind::Exists);
  f->var = std::move(var);
  f->args = {std::move(body)};
  return f;
}

FormulaPtr Formula::forall(std::string var, FormulaPtr body) {
  auto f = make(Kind::Forall);
  f->var = std::move(var);
  f->args = {std::move(body)};
  return f;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return true;
    case Formula::Kind::Atom:
      return a->rel == b->rel && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case Formula::Kind::Divides:
      return a->modulus == b->modulus && equal(a->lhs, b->lhs);
    case Formula::Kind::Fin:
      return equal(a->lhs, b->lhs);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      if (a->var != b->var) return false;
      [[fallthrough]];
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      if (a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) return false;
      }
      return true;
  }
  return false;
}

// ---------------------------------------------------------------- lexing

namespace {

struct Token {
  enum class Type { Int, Ident, Exists, Forall, Sym, End };
  Type type = Type::End;
  std::string text;
  std::size_t pos = 0;
};

bool is_keyword(const std::string& s) { return s == "or" || s == "fin" || s == "true" || s == "false"; }

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto at = [&](std::size_t k) { return k < src.size() ? src[k] : '\0'; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token tok;
    tok.pos = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (std::isdigit(static_cast<unsigned char>(at(j)))) ++j;
      tok.type = Token::Type::Int;
      tok.text = src.substr(i, j - i);
      i = j;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (std::islower(static_cast<unsigned char>(at(j))) || std::isdigit(static_cast<unsigned char>(at(j)))) ++j;
      tok.type = Token::Type::Ident;
      tok.text = src.substr(i, j - i);
      i = j;
    } else if (c == 'E' || c == 'A') {
      if (std::isalnum(static_cast<unsigned char>(at(i + 1)))) {
        throw SyntaxError("unexpected identifier starting with '" + std::string(1, c) + "'", i);
      }
      tok.type = c == 'E' ? Token::Type::Exists : Token::Type::Forall;
      tok.text = std::string(1, c);
      ++i;
    } else {
      static const char* two[] = {"<=", ">=", "!=", "<*", "=*"};
      tok.type = Token::Type::Sym;
      bool matched = false;
      for (const char* s : two) {
        if (c == s[0] && at(i + 1) == s[1]) {
          tok.text = s;
          i += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string("().~&|+-*<=>").find(c) == std::string::npos) {
          throw SyntaxError(std::string("unexpected character '") + c + "'", i);
        }
        tok.text = std::string(1, c);
        ++i;
      }
    }
    out.push_back(tok);
  }
  Token end;
  end.type = Token::Type::End;
  end.pos = src.size();
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  FormulaPtr formula_all() {
    auto f = formula();
    expect_end();
    return f;
  }

  TermPtr term_all() {
    auto t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  bool is_sym(const std::string& s, std::size_t ahead = 0) const {
    return peek(ahead).type == Token::Type::Sym && peek(ahead).text == s;
  }

  bool is_ident(const std::string& s) const { return peek().type == Token::Type::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& what) const {
    const auto& t = peek();
    std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(what + ", found " + found, t.pos);
  }

  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    ++pos_;
  }

  void expect_end() const {
    if (peek().type != Token::Type::End) fail("unexpected trailing input");
  }

  std::string variable() {
    if (peek().type != Token::Type::Ident || is_keyword(peek().text)) fail("expected a variable");
    return toks_[pos_++].text;
  }

  FormulaPtr formula() {
    if (peek().type == Token::Type::Exists || peek().type == Token::Type::Forall) return quant();
    return disj();
  }

  FormulaPtr quant() {
    bool ex = peek().type == Token::Type::Exists;
    ++pos_;
    std::string v = variable();
    expect_sym(".");
    auto body = formula();
    return ex ? Formula::exists(v, body) : Formula::forall(v, body);
  }

  FormulaPtr disj() {
    std::vector<FormulaPtr> parts{conj()};
    while (is_ident("or")) {
      ++pos_;
      parts.push_back(conj());
    }
    return Formula::disj(std::move(parts));
  }

  FormulaPtr conj() {
    std::vector<FormulaPtr> parts{unary()};
    while (is_sym("&")) {
      ++pos_;
      parts.push_back(unary());
    }
    return Formula::conj(std::move(parts));
  }

  FormulaPtr unary() {
    if (is_sym("~")) {
      ++pos_;
      return Formula::negate(unary());
    }
    if (peek().type == Token::Type::Exists || peek().type == Token::Type::Forall) return quant();
    if (is_sym("(")) {
      std::size_t save = pos_;
      try {
        return atom();
      } catch (const SyntaxError&) {
        pos_ = save;
      }
      ++pos_;
      auto f = formula();
      expect_sym(")");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    if (is_ident("true") || is_ident("false")) {
      bool v = peek().text == "true";
      ++pos_;
      return Formula::truth(v);
    }
    if (is_ident("fin")) {
      ++pos_;
      expect_sym("(");
      auto t = term();
      expect_sym(")");
      return Formula::fin(t);
    }
    if (peek().type == Token::Type::Int && is_sym("|", 1)) {
      const auto& tok = peek();
      Integer n = parse_integer(tok.text);
      if (n <= 0) throw SyntaxError("divisibility modulus must be positive", tok.pos);
      pos_ += 2;
      return Formula::divides(n, term());
    }
    auto lhs = term();
    static const std::pair<const char*, Rel> rels[] = {{"<", Rel::Lt},   {"<=", Rel::Le},     {"=", Rel::Eq},
                                                       {"!=", Rel::Ne},  {">", Rel::Gt},      {">=", Rel::Ge},
                                                       {"<*", Rel::StarLt}, {"=*", Rel::StarEq}};
    for (const auto& [sym, rel] : rels) {
      if (is_sym(sym)) {
        ++pos_;
        return Formula::atom(rel, lhs, term());
      }
    }
    fail("expected a relation");
  }

  TermPtr term() {
    TermPtr acc;
    if (is_sym("-")) {
      ++pos_;
      if (peek().type == Token::Type::Int) {
        acc = mono_from_int(-parse_integer(toks_[pos_++].text));
      } else {
        acc = Term::neg(factor());
      }
    } else {
      acc = mono();
    }
    while (is_sym("+") || is_sym("-")) {
      bool plus = is_sym("+");
      ++pos_;
      auto rhs = mono();
      acc = plus ? Term::add(acc, rhs) : Term::sub(acc, rhs);
    }
    return acc;
  }

  TermPtr mono_from_int(Integer k) {
    if (is_sym("*")) {
      ++pos_;
      return Term::scale(k, factor());
    }
    return Term::constant(k);
  }

  TermPtr mono() {
    if (peek().type == Token::Type::Int) return mono_from_int(parse_integer(toks_[pos_++].text));
    return factor();
  }

  TermPtr factor() {
    if (peek().type == Token::Type::Int) return Term::constant(parse_integer(toks_[pos_++].text));
    if (is_sym("-")) {
      ++pos_;
      return Term::neg(factor());
    }
    if (is_sym("(")) {
      ++pos_;
      auto t = term();
      expect_sym(")");
      return t;
    }
    return Term::var(variable());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- renaming

void collect_names(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->op == Term::Op::Var) out.insert(t->name);
  collect_names(t->left, out);
  collect_names(t->right, out);
}

void collect_names(const FormulaPtr& f, std::set<std::string>& out) {
  collect_names(f->lhs, out);
  collect_names(f->rhs, out);
  if (!f->var.empty()) out.insert(f->var);
  for (const auto& a : f->args) collect_names(a, out);
}

TermPtr rename_term(const TermPtr& t, const std::map<std::string, std::string>& env) {
  if (!t) return t;
  switch (t->op) {
    case Term::Op::Var: {
      auto it = env.find(t->name);
      return it == env.end() ? t : Term::var(it->second);
    }
    case Term::Op::Const:
      return t;
    case Term::Op::Add:
      return Term::add(rename_term(t->left, env), rename_term(t->right, env));
    case Term::Op::Sub:
      return Term::sub(rename_term(t->left, env), rename_term(t->right, env));
    case Term::Op::Neg:
      return Term::neg(rename_term(t->left, env));
    case Term::Op::Scale:
      return Term::scale(t->value, rename_term(t->left, env));
  }
  return t;
}

class Renamer {
 public:
  explicit Renamer(const FormulaPtr& f) : taken_() {
    collect_names(f, taken_);
    used_ = free_variables(f);
  }

  FormulaPtr run(const FormulaPtr& f, std::map<std::string, std::string> env) {
    switch (f->kind) {
      case Formula::Kind::True:
      case Formula::Kind::False:
        return f;
      case Formula::Kind::Atom:
        return Formula::atom(f->rel, rename_term(f->lhs, env), rename_term(f->rhs, env));
      case Formula::Kind::Divides:
        return Formula::divides(f->modulus, rename_term(f->lhs, env));
      case Formula::Kind::Fin:
        return Formula::fin(rename_term(f->lhs, env));
      case Formula::Kind::Not:
        return Formula::negate(run(f->args[0], env));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<FormulaPtr> parts;
        for (const auto& a : f->args) parts.push_back(run(a, env));
        return f->kind == Formula::Kind::And ? Formula::conj(parts) : Formula::disj(parts);
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        std::string v = f->var;
        if (used_.count(v)) {
          v = fresh(v);
          env[f->var] = v;
        } else {
          env.erase(f->var);
        }
        used_.insert(v);
        auto body = run(f->args[0], env);
        return f->kind == Formula::Kind::Exists ? Formula::exists(v, body) : Formula::forall(v, body);
      }
    }
    return f;
  }

 private:
  std::string fresh(const std::string& base) {
    for (int i = 1;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!taken_.count(cand)) {
        taken_.insert(cand);
        return cand;
      }
    }
  }

  std::set<std::string> taken_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------- printing

enum class TermCtx { Leading, Right, NegOperand, ScaleOperand };

bool negative_literal(const TermPtr& t) {
  return (t->op == Term::Op::Const || t->op == Term::Op::Scale) && t->value < 0;
}

void print_term(const TermPtr& t, TermCtx ctx, std::ostream& out) {
  bool sum = t->op == Term::Op::Add || t->op == Term::Op::Sub;
  bool wrap = false;
  switch (ctx) {
    case TermCtx::Leading:
      break;
    case TermCtx::Right:
      wrap = sum || negative_literal(t);
      break;
    case TermCtx::NegOperand:
      wrap = sum || t->op == Term::Op::Const || t->op == Term::Op::Scale;
      break;
    case TermCtx::ScaleOperand:
      wrap = sum || t->op == Term::Op::Scale || negative_literal(t);
      break;
  }
  if (wrap) {
    out << "(";
    print_term(t, TermCtx::Leading, out);
    out << ")";
    return;
  }
  switch (t->op) {
    case Term::Op::Var:
      out << t->name;
      break;
    case Term::Op::Const:
      out << t->value.get_str();
      break;
    case Term::Op::Add:
    case Term::Op::Sub:
      print_term(t->left, TermCtx::Leading, out);
      out << (t->op == Term::Op::Add ? " + " : " - ");
      print_term(t->right, TermCtx::Right, out);
      break;
    case Term::Op::Neg:
      out << "-";
      print_term(t->left, TermCtx::NegOperand, out);
      break;
    case Term::Op::Scale:
      out << t->value.get_str() << "*";
      print_term(t->left, TermCtx::ScaleOperand, out);
      break;
  }
}

// prec: 0 anything, 1 operand of "or", 2 operand of "&" or "~".
void print_formula(const FormulaPtr& f, int prec, bool tail, std::ostream& out) {
  auto paren = [&](bool needed, auto&& body) {
    if (needed) out << "(";
    body(needed ? true : tail);
    if (needed) out << ")";
  };
  switch (f->kind) {
    case Formula::Kind::True:
      out << "true";
      return;
    case Formula::Kind::False:
      out << "false";
      return;
    case Formula::Kind::Atom:
      print_term(f->lhs, TermCtx::Leading, out);
      out << " " << to_string(f->rel) << " ";
      print_term(f->rhs, TermCtx::Leading, out);
      return;
    case Formula::Kind::Divides:
      out << f->modulus.get_str() << " | ";
      print_term(f->lhs, TermCtx::Leading, out);
      return;
    case Formula::Kind::Fin:
      out << "fin(";
      print_term(f->lhs, TermCtx::Leading, out);
      out << ")";
      return;
    case Formula::Kind::Not:
      out << "~";
      print_formula(f->args[0], 2, tail, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool is_and = f->kind == Formula::Kind::And;
      paren(prec > (is_and ? 1 : 0), [&](bool t) {
        for (std::size_t i = 0; i < f->args.size(); ++i) {
          if (i) out << (is_and ? " & " : " or ");
          print_formula(f->args[i], is_and ? 2 : 1, t && i + 1 == f->args.size(), out);
        }
      });
      return;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      paren(!tail, [&](bool) {
        out << (f->kind == Formula::Kind::Exists ? "E " : "A ") << f->var << ". ";
        print_formula(f->args[0], 0, true, out);
      });
      return;
  }
}

void free_vars(const TermPtr& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (!t) return;
  if (t->op == Term::Op::Var && !bound.count(t->name)) out.insert(t->name);
  free_vars(t->left, bound, out);
  free_vars(t->right, bound, out);
}

void free_vars(const FormulaPtr& f, std::set<std::string> bound, std::set<std::string>& out) {
  free_vars(f->lhs, bound, out);
  free_vars(f->rhs, bound, out);
  if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) bound.insert(f->var);
  for (const auto& a : f->args) free_vars(a, bound, out);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  auto f = Parser(text).formula_all();
  return Renamer(f).run(f, {});
}

TermPtr parse_term(const std::string& text) { return Parser(text).term_all(); }

std::string print(const FormulaPtr& f) {
  std::ostringstream out;
  print_formula(f, 0, true, out);
  return out.str();
}

std::string print(const TermPtr& t) {
  std::ostringstream out;
  print_term(t, TermCtx::Leading, out);
  return out.str();
}

std::set<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> out;
  free_vars(f, {}, out);
  return out;
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) return false;
  for (const auto& a : f->args) {
    if (!is_quantifier_free(a)) return false;
  }
  return true;
}

bool is_star_free(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Fin) return false;
  if (f->kind == Formula::Kind::Atom && (f->rel == Rel::StarLt || f->rel == Rel::StarEq)) return false;
  for (const auto& a : f->args) {
    if (!is_star_free(a)) return false;
  }
  return true;
}

int quantifier_depth(const FormulaPtr& f) {
  int inner = 0;
  for (const auto& a : f->args) inner = std::max(inner, quantifier_depth(a));
  bool q = f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall;
  return inner + (q ? 1 : 0);
}

// ---------------------------------------------------------------- linear terms

Integer LinearTerm::coeff(const std::string& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Integer(0) : it->second;
}

LinearTerm operator+(const LinearTerm& a, const LinearTerm& b) {
  LinearTerm out = a;
  for (const auto& [v, k] : b.coeffs) {
    auto& slot = out.coeffs[v];
    slot += k;
    if (slot == 0) out.coeffs.erase(v);
  }
  out.constant += b.constant;
  return out;
}

LinearTerm operator*(const Integer& k, const LinearTerm& a) {
  LinearTerm out;
  if (k == 0) return out;
  for (const auto& [v, c] : a.coeffs) out.coeffs[v] = k * c;
  out.constant = k * a.constant;
  return out;
}

LinearTerm operator-(const LinearTerm& a, const LinearTerm& b) { return a + Integer(-1) * b; }

LinearTerm substitute(const LinearTerm& t, const std::string& v, const LinearTerm& by) {
  Integer k = t.coeff(v);
  if (k == 0) return t;
  LinearTerm rest = t;
  rest.coeffs.erase(v);
  return rest + k * by;
}

LinearTerm linearize(const TermPtr& t) {
  switch (t->op) {
    case Term::Op::Var: {
      LinearTerm out;
      out.coeffs[t->name] = 1;
      return out;
    }
    case Term::Op::Const: {
      LinearTerm out;
      out.constant = t->value;
      return out;
    }
    case Term::Op::Add:
      return linearize(t->left) + linearize(t->right);
    case Term::Op::Sub:
      return linearize(t->left) - linearize(t->right);
    case Term::Op::Neg:
      return Integer(-1) * linearize(t->left);
    case Term::Op::Scale:
      return t->value * linearize(t->left);
  }
  return {};
}

TermPtr to_term(const LinearTerm& t) {
  TermPtr acc;
  for (const auto& [v, k] : t.coeffs) {
    TermPtr mono = k == 1 ? Term::var(v) : (k == -1 ? Term::neg(Term::var(v)) : Term::scale(k, Term::var(v)));
    if (!acc) {
      acc = mono;
    } else if (k < 0) {
      Integer a = -k;
      acc = Term::sub(acc, a == 1 ? Term::var(v) : Term::scale(a, Term::var(v)));
    } else {
      acc = Term::add(acc, mono);
    }
  }
  if (!acc) return Term::constant(t.constant);
  if (t.constant > 0) acc = Term::add(acc, Term::constant(t.constant));
  if (t.constant < 0) acc = Term::sub(acc, Term::constant(-t.constant));
  return acc;
}

}  // namespace presb
