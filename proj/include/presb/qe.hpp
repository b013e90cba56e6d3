#pragma once

// Quantifier elimination for Presburger arithmetic (Cooper's method).

#include "presb/formula.hpp"

namespace presb {

/// A quantifier-free formula equivalent to f in every Presburger group. The
/// result uses "<", "=", "!=", "n | t" and "~n | t" atoms only. f must be
/// star-free (PreconditionViolated otherwise).
FormulaPtr eliminate_quantifiers(const FormulaPtr& f);

/// Truth of a closed star-free formula in Presburger arithmetic.
bool decide_sentence(const FormulaPtr& f);

/// Constant folding and normalisation of a quantifier-free formula.
FormulaPtr simplify(const FormulaPtr& f);

}  // namespace presb
