#include "presb/diagram.hpp"

#include <cctype>
#include <memory>

#include "presb/error.hpp"

namespace presb {

namespace {

class FactLexer {
 public:
  explicit FactLexer(const std::string& text) : text_(text) {}

  std::string name() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) throw SyntaxError("expected an element name", start);
    return text_.substr(start, pos_ - start);
  }

  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) throw SyntaxError(std::string("expected '") + ch + "'", pos_);
  }

  void finish() {
    skip();
    if (pos_ != text_.size()) throw SyntaxError("trailing input", pos_);
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

DiagramFact parse_fact(const std::string& text) {
  FactLexer lex(text);
  std::string a = lex.name();
  DiagramFact fact;
  if (lex.accept('<')) {
    fact = DiagramFact::less(a, lex.name());
  } else if (lex.accept('+')) {
    std::string b = lex.name();
    lex.expect('=');
    fact = DiagramFact::sum(a, b, lex.name());
  } else {
    lex.expect('=');
    std::string rhs = lex.name();
    if (rhs != "0") throw SyntaxError("only 'a=0' equalities are diagram facts", text.find('='));
    fact = DiagramFact::zero(a);
  }
  lex.finish();
  return fact;
}

std::string to_string(const DiagramFact& fact) {
  switch (fact.kind) {
    case DiagramFact::Kind::Zero:
      return fact.names[0] + "=0";
    case DiagramFact::Kind::Less:
      return fact.names[0] + "<" + fact.names[1];
    case DiagramFact::Kind::Sum:
      return fact.names[0] + "+" + fact.names[1] + "=" + fact.names[2];
  }
  return "?";
}

FactStream stream_of(std::vector<DiagramFact> facts) {
  auto data = std::make_shared<std::vector<DiagramFact>>(std::move(facts));
  auto next = std::make_shared<std::size_t>(0);
  return [data, next]() -> std::optional<DiagramFact> {
    if (*next >= data->size()) return std::nullopt;
    return (*data)[(*next)++];
  };
}

DiagramAnswer complete_diagram(const FactStream& stream, const DiagramFact& query, std::size_t budget) {
  const auto& q = query.names;
  if (query.kind == DiagramFact::Kind::Less && q[0] == q[1]) return {false, 0};
  std::size_t steps = 0;
  while (steps < budget) {
    auto fact = stream();
    if (!fact) break;
    ++steps;
    const auto& f = fact->names;
    if (fact->kind != query.kind) continue;
    switch (query.kind) {
      case DiagramFact::Kind::Zero:
        return {f[0] == q[0], steps};
      case DiagramFact::Kind::Less:
        if (f[0] == q[0] && f[1] == q[1]) return {true, steps};
        if (f[0] == q[1] && f[1] == q[0]) return {false, steps};
        break;
      case DiagramFact::Kind::Sum:
        if ((f[0] == q[0] && f[1] == q[1]) || (f[0] == q[1] && f[1] == q[0])) return {f[2] == q[2], steps};
        break;
    }
  }
  throw Diverges("no fact settled '" + to_string(query) + "' within " + std::to_string(steps) + " steps");
}

}  // namespace presb
