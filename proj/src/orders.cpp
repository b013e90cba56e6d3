#include "presb/orders.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "presb/error.hpp"

namespace presb {

namespace {

using u128 = unsigned __int128;

OrderIndex cantor_pair(std::uint64_t x, std::uint64_t y) {
  u128 s = static_cast<u128>(x) + y;
  u128 v = s * (s + 1) / 2 + y;
  if (v > UINT64_MAX) throw std::overflow_error("order index overflow");
  return static_cast<OrderIndex>(v);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(OrderIndex z) {
  // largest w with w(w+1)/2 <= z
  std::uint64_t w = 0;
  {
    std::uint64_t lo = 0, hi = std::uint64_t{1} << 33;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (static_cast<u128>(mid) * (mid + 1) / 2 <= z) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    w = lo;
  }
  std::uint64_t t = static_cast<std::uint64_t>(static_cast<u128>(w) * (w + 1) / 2);
  std::uint64_t y = z - t;
  return {w - y, y};
}

std::uint64_t fusc(std::uint64_t n) {
  std::uint64_t a = 1, b = 0;
  while (n != 0) {
    if (n & 1) {
      b += a;
    } else {
      a += b;
    }
    n >>= 1;
  }
  return b;
}

// Position of a positive rational in the Calkin-Wilf enumeration (1-based).
std::uint64_t calkin_wilf_index(Integer a, Integer b) {
  std::vector<bool> bits;
  while (!(a == 1 && b == 1)) {
    if (a > b) {
      bits.push_back(true);
      a -= b;
    } else {
      bits.push_back(false);
      b -= a;
    }
    if (bits.size() > 62) throw std::overflow_error("rational too deep for a 64-bit eta index");
  }
  std::uint64_t n = 1;
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) n = n * 2 + (*it ? 1 : 0);
  return n;
}

}  // namespace

struct OrderPresentation::Node {
  Kind kind = Kind::Finite;
  std::uint64_t k = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

OrderPresentation::OrderPresentation(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

OrderPresentation OrderPresentation::finite(std::uint64_t k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Finite;
  n->k = k;
  return OrderPresentation(std::move(n));
}

OrderPresentation OrderPresentation::omega() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Omega;
  return OrderPresentation(std::move(n));
}

OrderPresentation OrderPresentation::zeta() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Zeta;
  return OrderPresentation(std::move(n));
}

OrderPresentation OrderPresentation::eta() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eta;
  return OrderPresentation(std::move(n));
}

OrderPresentation OrderPresentation::sum(const OrderPresentation& first, const OrderPresentation& second) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->a = first.node_;
  n->b = second.node_;
  return OrderPresentation(std::move(n));
}

OrderPresentation OrderPresentation::lex_pairs(const OrderPresentation& a, const OrderPresentation& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LexPairs;
  n->a = a.node_;
  n->b = b.node_;
  return OrderPresentation(std::move(n));
}

OrderPresentation OrderPresentation::omega_power(unsigned k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::OmegaPower;
  n->k = k;
  return OrderPresentation(std::move(n));
}

OrderPresentation::Kind OrderPresentation::kind() const { return node_->kind; }

std::optional<std::uint64_t> OrderPresentation::size() const {
  switch (node_->kind) {
    case Kind::Finite:
      return node_->k;
    case Kind::Omega:
    case Kind::Zeta:
    case Kind::Eta:
      return std::nullopt;
    case Kind::OmegaPower:
      if (node_->k == 0) return 1;
      return std::nullopt;
    case Kind::Sum: {
      auto a = OrderPresentation(node_->a).size();
      auto b = OrderPresentation(node_->b).size();
      if (a && b) return *a + *b;
      return std::nullopt;
    }
    case Kind::LexPairs: {
      auto a = OrderPresentation(node_->a).size();
      auto b = OrderPresentation(node_->b).size();
      if ((a && *a == 0) || (b && *b == 0)) return 0;
      if (a && b) return *a * *b;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

struct SumPos {
  bool second;
  OrderIndex inner;
};

SumPos decode_sum(const OrderPresentation& a, const OrderPresentation& b, OrderIndex i) {
  if (auto na = a.size()) {
    if (i < *na) return {false, i};
    return {true, i - *na};
  }
  if (auto nb = b.size()) {
    if (i < *nb) return {true, i};
    return {false, i - *nb};
  }
  return {(i & 1) != 0, i / 2};
}

struct PairPos {
  OrderIndex a;
  OrderIndex b;
};

std::optional<PairPos> decode_pair(const OrderPresentation& a, const OrderPresentation& b, OrderIndex i) {
  auto na = a.size();
  auto nb = b.size();
  if (na) {
    if (*na == 0) return std::nullopt;
    return PairPos{i % *na, i / *na};
  }
  if (nb) {
    if (*nb == 0) return std::nullopt;
    return PairPos{i / *nb, i % *nb};
  }
  auto [x, y] = cantor_unpair(i);
  return PairPos{x, y};
}

}  // namespace

bool OrderPresentation::contains(OrderIndex i) const {
  switch (node_->kind) {
    case Kind::Finite:
      return i < node_->k;
    case Kind::Omega:
    case Kind::Zeta:
    case Kind::Eta:
      return true;
    case Kind::OmegaPower:
      return node_->k != 0 || i == 0;
    case Kind::Sum: {
      OrderPresentation a(node_->a), b(node_->b);
      auto pos = decode_sum(a, b, i);
      return pos.second ? b.contains(pos.inner) : a.contains(pos.inner);
    }
    case Kind::LexPairs: {
      OrderPresentation a(node_->a), b(node_->b);
      auto pos = decode_pair(a, b, i);
      return pos && a.contains(pos->a) && b.contains(pos->b);
    }
  }
  return false;
}

std::vector<std::uint64_t> OrderPresentation::omega_power_coords(OrderIndex i) const {
  if (node_->kind != Kind::OmegaPower) throw std::logic_error("not an omega power");
  std::vector<std::uint64_t> coords;
  if (node_->k == 0) return coords;
  for (std::uint64_t level = 1; level < node_->k; ++level) {
    auto [head, rest] = cantor_unpair(i);
    coords.push_back(head);
    i = rest;
  }
  coords.push_back(i);
  return coords;
}

OrderIndex OrderPresentation::omega_power_index(const std::vector<std::uint64_t>& coords) const {
  if (node_->kind != Kind::OmegaPower || coords.size() != node_->k) {
    throw OutOfDomain("tuple length does not match omega^" + std::to_string(node_->k));
  }
  if (coords.empty()) return 0;
  OrderIndex idx = coords.back();
  for (std::size_t j = coords.size() - 1; j-- > 0;) idx = cantor_pair(coords[j], idx);
  return idx;
}

OrderIndex OrderPresentation::sum_index(bool second, OrderIndex inner) const {
  if (node_->kind != Kind::Sum) throw std::logic_error("not a sum order");
  OrderPresentation a(node_->a), b(node_->b);
  OrderIndex idx;
  if (auto na = a.size()) {
    idx = second ? *na + inner : inner;
  } else if (auto nb = b.size()) {
    idx = second ? inner : *nb + inner;
  } else {
    idx = inner * 2 + (second ? 1 : 0);
  }
  if (!contains(idx)) throw OutOfDomain("summand index " + std::to_string(inner) + " not in domain");
  return idx;
}

OrderIndex OrderPresentation::pair_index(OrderIndex ia, OrderIndex ib) const {
  if (node_->kind != Kind::LexPairs) throw std::logic_error("not a pair order");
  OrderPresentation a(node_->a), b(node_->b);
  if (!a.contains(ia) || !b.contains(ib)) throw OutOfDomain("pair coordinate not in domain");
  if (auto na = a.size()) return ib * *na + ia;
  if (auto nb = b.size()) return ia * *nb + ib;
  return cantor_pair(ia, ib);
}

OrderIndex OrderPresentation::zeta_index(const Integer& z) {
  return z >= 0 ? to_u64(2 * z) : to_u64(-2 * z - 1);
}

Integer OrderPresentation::zeta_value(OrderIndex i) {
  Integer half = Integer(static_cast<unsigned long>(i / 2));
  return (i % 2 == 0) ? half : Integer(-half - 1);
}

OrderIndex OrderPresentation::eta_index(const Rational& q) {
  if (q == 0) return 0;
  Rational aq = abs(q);
  std::uint64_t k = calkin_wilf_index(aq.get_num(), aq.get_den());
  return q > 0 ? 2 * k - 1 : 2 * k;
}

Rational OrderPresentation::eta_value(OrderIndex i) {
  if (i == 0) return Rational(0);
  std::uint64_t k = (i + 1) / 2;
  Rational q = make_rational(Integer(static_cast<unsigned long>(fusc(k))),
                             Integer(static_cast<unsigned long>(fusc(k + 1))));
  return (i % 2 == 1) ? q : Rational(-q);
}

std::strong_ordering OrderPresentation::compare(OrderIndex i, OrderIndex j) const {
  if (!contains(i)) throw OutOfDomain("index " + std::to_string(i) + " not in " + spec());
  if (!contains(j)) throw OutOfDomain("index " + std::to_string(j) + " not in " + spec());
  switch (node_->kind) {
    case Kind::Finite:
    case Kind::Omega:
      return i <=> j;
    case Kind::Zeta: {
      int c = cmp(zeta_value(i), zeta_value(j));
      return c <=> 0;
    }
    case Kind::Eta: {
      int c = cmp(eta_value(i), eta_value(j));
      return c <=> 0;
    }
    case Kind::OmegaPower:
      return omega_power_coords(i) <=> omega_power_coords(j);
    case Kind::Sum: {
      OrderPresentation a(node_->a), b(node_->b);
      auto pi = decode_sum(a, b, i);
      auto pj = decode_sum(a, b, j);
      if (pi.second != pj.second) return pi.second ? std::strong_ordering::greater : std::strong_ordering::less;
      return pi.second ? b.compare(pi.inner, pj.inner) : a.compare(pi.inner, pj.inner);
    }
    case Kind::LexPairs: {
      OrderPresentation a(node_->a), b(node_->b);
      auto pi = *decode_pair(a, b, i);
      auto pj = *decode_pair(a, b, j);
      auto c = b.compare(pi.b, pj.b);
      if (c != 0) return c;
      return a.compare(pi.a, pj.a);
    }
  }
  return std::strong_ordering::equal;
}

std::vector<Cardinality> OrderPresentation::intervals(std::span<const OrderIndex> tuple) const {
  for (std::size_t t = 0; t < tuple.size(); ++t) {
    if (!contains(tuple[t])) throw OutOfDomain("index " + std::to_string(tuple[t]) + " not in " + spec());
    if (t > 0 && !less(tuple[t - 1], tuple[t])) {
      throw PreconditionViolated("interval tuple must be strictly ascending");
    }
  }
  std::vector<Cardinality> out;
  switch (node_->kind) {
    case Kind::Finite:
    case Kind::Omega: {
      std::uint64_t prev = 0;
      bool first = true;
      for (auto x : tuple) {
        out.push_back(Cardinality::finite(first ? x : x - prev - 1));
        prev = x;
        first = false;
      }
      if (node_->kind == Kind::Omega) {
        out.push_back(Cardinality::omega());
      } else {
        out.push_back(Cardinality::finite(tuple.empty() ? node_->k : node_->k - prev - 1));
      }
      return out;
    }
    case Kind::Zeta: {
      out.push_back(Cardinality::omega());
      for (std::size_t t = 1; t < tuple.size(); ++t) {
        Integer gap = zeta_value(tuple[t]) - zeta_value(tuple[t - 1]) - 1;
        out.push_back(Cardinality::finite(to_u64(gap)));
      }
      if (!tuple.empty()) out.push_back(Cardinality::omega());
      return out;
    }
    case Kind::Eta:
      return std::vector<Cardinality>(tuple.size() + 1, Cardinality::omega());
    case Kind::Sum: {
      OrderPresentation a(node_->a), b(node_->b);
      std::vector<OrderIndex> ta, tb;
      for (auto x : tuple) {
        auto pos = decode_sum(a, b, x);
        (pos.second ? tb : ta).push_back(pos.inner);
      }
      auto ia = a.intervals(ta);
      auto ib = b.intervals(tb);
      out.assign(ia.begin(), ia.end() - 1);
      out.push_back(ia.back() + ib.front());
      out.insert(out.end(), ib.begin() + 1, ib.end());
      return out;
    }
    case Kind::LexPairs:
    case Kind::OmegaPower:
      throw NotComputable("interval sizes are not available for " + spec());
  }
  return out;
}

std::vector<OrderIndex> OrderPresentation::elements() const {
  auto n = size();
  if (!n) throw NotFinite(spec() + " is infinite");
  std::vector<OrderIndex> out;
  out.reserve(*n);
  for (OrderIndex i = 0; out.size() < *n; ++i) {
    if (contains(i)) out.push_back(i);
  }
  std::sort(out.begin(), out.end(), [this](OrderIndex x, OrderIndex y) { return less(x, y); });
  return out;
}

std::string OrderPresentation::describe(OrderIndex i) const {
  if (!contains(i)) throw OutOfDomain("index " + std::to_string(i) + " not in " + spec());
  switch (node_->kind) {
    case Kind::Finite:
    case Kind::Omega:
      return std::to_string(i);
    case Kind::Zeta:
      return zeta_value(i).get_str();
    case Kind::Eta:
      return to_string(eta_value(i));
    case Kind::OmegaPower: {
      std::string s = "(";
      auto coords = omega_power_coords(i);
      for (std::size_t t = 0; t < coords.size(); ++t) s += (t ? "," : "") + std::to_string(coords[t]);
      return s + ")";
    }
    case Kind::Sum: {
      OrderPresentation a(node_->a), b(node_->b);
      auto pos = decode_sum(a, b, i);
      return pos.second ? "R:" + b.describe(pos.inner) : "L:" + a.describe(pos.inner);
    }
    case Kind::LexPairs: {
      OrderPresentation a(node_->a), b(node_->b);
      auto pos = *decode_pair(a, b, i);
      return "(" + a.describe(pos.a) + "," + b.describe(pos.b) + ")";
    }
  }
  return {};
}

std::string OrderPresentation::spec() const {
  switch (node_->kind) {
    case Kind::Finite:
      return "finite:" + std::to_string(node_->k);
    case Kind::Omega:
      return "omega";
    case Kind::Zeta:
      return "zeta";
    case Kind::Eta:
      return "eta";
    case Kind::OmegaPower:
      return "omega^" + std::to_string(node_->k);
    case Kind::Sum:
      return "sum(" + OrderPresentation(node_->a).spec() + "," + OrderPresentation(node_->b).spec() + ")";
    case Kind::LexPairs:
      return "lex(" + OrderPresentation(node_->a).spec() + "," + OrderPresentation(node_->b).spec() + ")";
  }
  return {};
}

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  OrderPresentation parse_all() {
    OrderPresentation out = parse_order();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError("order spec: " + what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!eat(token)) fail("expected '" + std::string(token) + "'");
  }

  std::uint64_t number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoull(std::string(text_.substr(start, pos_ - start)));
  }

  OrderPresentation parse_order() {
    if (eat("finite:")) return OrderPresentation::finite(number());
    if (eat("sum(")) {
      auto a = parse_order();
      expect(",");
      auto b = parse_order();
      expect(")");
      return OrderPresentation::sum(a, b);
    }
    if (eat("lex(")) {
      auto a = parse_order();
      expect(",");
      auto b = parse_order();
      expect(")");
      return OrderPresentation::lex_pairs(a, b);
    }
    if (eat("omega")) {
      if (eat("^")) return OrderPresentation::omega_power(static_cast<unsigned>(number()));
      return OrderPresentation::omega();
    }
    if (eat("zeta")) return OrderPresentation::zeta();
    if (eat("eta")) return OrderPresentation::eta();
    fail("unknown order");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

OrderPresentation OrderPresentation::parse(std::string_view spec) { return SpecParser(spec).parse_all(); }

}  // namespace presb
