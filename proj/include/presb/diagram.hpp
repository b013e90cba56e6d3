#pragma once

// Answering atomic queries about a divisible ordered abelian group from an
// enumeration of its atomic diagram.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace presb {

/// "a=0", "a<b" or "a+b=c" over element names.
struct DiagramFact {
  enum class Kind { Zero, Less, Sum };
  Kind kind = Kind::Zero;
  std::vector<std::string> names;

  static DiagramFact zero(std::string a) { return {Kind::Zero, {std::move(a)}}; }
  static DiagramFact less(std::string a, std::string b) { return {Kind::Less, {std::move(a), std::move(b)}}; }
  static DiagramFact sum(std::string a, std::string b, std::string c) {
    return {Kind::Sum, {std::move(a), std::move(b), std::move(c)}};
  }
  friend bool operator==(const DiagramFact&, const DiagramFact&) = default;
};

/// Throws SyntaxError on anything but the three fact shapes.
DiagramFact parse_fact(const std::string& text);
std::string to_string(const DiagramFact& fact);

/// Next fact of the enumeration, or nullopt when it ends.
using FactStream = std::function<std::optional<DiagramFact>()>;

FactStream stream_of(std::vector<DiagramFact> facts);

struct DiagramAnswer {
  bool value = false;
  /// Facts read before the answer was settled.
  std::size_t steps = 0;
};

/// Reads the stream until the fact deciding `query` appears. Distinct names
/// denote distinct elements. Diverges when the budget runs out or the stream
/// ends first.
DiagramAnswer complete_diagram(const FactStream& stream, const DiagramFact& query, std::size_t budget);

}  // namespace presb
