#pragma once

#include <stdexcept>
#include <string>

namespace presb {

/// Base of every error raised by the library. `kind()` names the failure
/// class so callers (and the CLI) can report it without RTTI games.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PRESB_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  }

PRESB_DEFINE_ERROR(MalformedSequence);
PRESB_DEFINE_ERROR(OutOfDomain);
PRESB_DEFINE_ERROR(NotComputable);
PRESB_DEFINE_ERROR(TagMismatch);
PRESB_DEFINE_ERROR(NotDivisible);
PRESB_DEFINE_ERROR(NotPlain);
PRESB_DEFINE_ERROR(ZeroElement);
PRESB_DEFINE_ERROR(BudgetExceeded);
PRESB_DEFINE_ERROR(Diverges);
PRESB_DEFINE_ERROR(PreconditionViolated);
PRESB_DEFINE_ERROR(ResidueMismatch);
PRESB_DEFINE_ERROR(CutMismatch);
PRESB_DEFINE_ERROR(DivisionFailed);
PRESB_DEFINE_ERROR(UnboundVariable);
PRESB_DEFINE_ERROR(NotFiniteOrder);
PRESB_DEFINE_ERROR(NonPositive);
PRESB_DEFINE_ERROR(NotFinite);
PRESB_DEFINE_ERROR(ConfigError);

#undef PRESB_DEFINE_ERROR

/// Parse failure with a byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error("SyntaxError", what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace presb
