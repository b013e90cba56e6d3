#pragma once

// First-order formulas over (+, -, <, 0, 1) with divisibility atoms, plus the
// starred atoms used by the order-to-group translation.
//
// Grammar (whitespace insignificant):
//
//   formula  := quant | disj
//   quant    := ("E" | "A") var "." formula
//   disj     := conj { "or" conj }
//   conj     := unary { "&" unary }
//   unary    := "~" unary | quant | atom | "(" formula ")"
//   atom     := "true" | "false" | "fin" "(" term ")" | int "|" term
//             | term rel term
//   rel      := "<" | "<=" | "=" | "!=" | ">" | ">=" | "<*" | "=*"
//   term     := ["-"] mono { ("+" | "-") mono }
//   mono     := int "*" factor | int | factor
//   factor   := var | "(" term ")" | "-" factor
//   var      := [a-z][a-z0-9]*   (except "or", "fin", "true", "false")
//
// A quantifier body extends as far to the right as possible.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "presb/numeric.hpp"

namespace presb {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Op { Var, Const, Add, Sub, Neg, Scale };
  Op op = Op::Const;
  std::string name;
  /// Constant value, or the factor of Scale.
  Integer value = 0;
  TermPtr left;
  TermPtr right;

  static TermPtr var(std::string name);
  static TermPtr constant(Integer v);
  static TermPtr add(TermPtr a, TermPtr b);
  static TermPtr sub(TermPtr a, TermPtr b);
  static TermPtr neg(TermPtr a);
  static TermPtr scale(Integer k, TermPtr a);
};

bool equal(const TermPtr& a, const TermPtr& b);

enum class Rel { Lt, Le, Eq, Ne, Gt, Ge, StarLt, StarEq };

std::string to_string(Rel r);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { True, False, Atom, Divides, Fin, Not, And, Or, Exists, Forall };
  Kind kind = Kind::True;
  Rel rel = Rel::Eq;
  /// Atom sides; Divides and Fin use `lhs` only.
  TermPtr lhs;
  TermPtr rhs;
  Integer modulus = 1;
  /// Bound variable of a quantifier.
  std::string var;
  /// Operands of Not (one), And / Or (two or more) and the quantifier body (one).
  std::vector<FormulaPtr> args;

  static FormulaPtr truth(bool value);
  static FormulaPtr atom(Rel rel, TermPtr lhs, TermPtr rhs);
  static FormulaPtr divides(Integer n, TermPtr t);
  static FormulaPtr fin(TermPtr t);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(std::vector<FormulaPtr> fs);
  static FormulaPtr disj(std::vector<FormulaPtr> fs);
  static FormulaPtr exists(std::string var, FormulaPtr body);
  static FormulaPtr forall(std::string var, FormulaPtr body);
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Parses and alpha-renames bound variables that clash with another binder or
/// with a free variable. Throws SyntaxError.
FormulaPtr parse_formula(const std::string& text);
TermPtr parse_term(const std::string& text);

std::string print(const FormulaPtr& f);
std::string print(const TermPtr& t);

std::set<std::string> free_variables(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);
/// True iff no starred atom or fin() occurs.
bool is_star_free(const FormulaPtr& f);
/// Nesting depth of quantifiers.
int quantifier_depth(const FormulaPtr& f);

/// sum coeffs[v] * v + constant, with no zero coefficients stored.
struct LinearTerm {
  std::map<std::string, Integer> coeffs;
  Integer constant = 0;

  Integer coeff(const std::string& v) const;
  bool is_constant() const { return coeffs.empty(); }
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
  friend bool operator<(const LinearTerm& a, const LinearTerm& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.constant < b.constant;
  }
};

LinearTerm linearize(const TermPtr& t);
LinearTerm operator+(const LinearTerm& a, const LinearTerm& b);
LinearTerm operator-(const LinearTerm& a, const LinearTerm& b);
LinearTerm operator*(const Integer& k, const LinearTerm& a);
/// Replaces v by the linear term `by`.
LinearTerm substitute(const LinearTerm& t, const std::string& v, const LinearTerm& by);
/// Variables in name order, then the constant; "0" for the zero term.
TermPtr to_term(const LinearTerm& t);

}  // namespace presb
