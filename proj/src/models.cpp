#include "presb/models.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "presb/error.hpp"

namespace presb {

namespace {

const char* kind_name(Model::Kind k) {
  switch (k) {
    case Model::Kind::StandardZ:
      return "z";
    case Model::Kind::PL:
      return "pl";
    case Model::Kind::ZAdjoin:
      return "zadjoin";
    case Model::Kind::QuadSum:
      return "quadsum";
    case Model::Kind::Cut:
      return "cut";
  }
  return "?";
}

std::size_t expected_tag(Model::Kind k) {
  switch (k) {
    case Model::Kind::StandardZ:
      return 0;
    case Model::Kind::PL:
      return 1;
    case Model::Kind::ZAdjoin:
      return 2;
    case Model::Kind::QuadSum:
      return 3;
    case Model::Kind::Cut:
      return 4;
  }
  return 0;
}

const char* tag_name(std::size_t index) {
  static const char* names[] = {"ZInt", "PLElem", "ZAdjoinElem", "QuadSumElem", "CutElem"};
  return index < 5 ? names[index] : "?";
}

Integer u64(std::uint64_t n) { return Integer(static_cast<unsigned long>(n)); }

template <class Map>
void drop_zero(Map& m, typename Map::key_type key) {
  auto it = m.find(key);
  if (it != m.end() && it->second == 0) m.erase(it);
}

// sign of a + b sqrt(p), exact.
int quad_sign(const QuadCoord& c, std::uint64_t p) {
  int sa = sign(c.a);
  int sb = sign(c.b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  Rational lhs = c.a * c.a;
  Rational rhs = c.b * c.b * u64(p);
  return lhs > rhs ? sa : sb;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  }
  return out;
}

bool looks_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// Splits "body;z=K" into body and K (default 0).
std::pair<std::string, Integer> split_integer_part(const std::string& text) {
  auto semi = text.rfind(';');
  if (semi == std::string::npos) return {text, Integer(0)};
  std::string tail = text.substr(semi + 1);
  if (tail.rfind("z=", 0) != 0) throw std::invalid_argument("expected ';z=<integer>' in '" + text + "'");
  return {text.substr(0, semi), parse_integer(tail.substr(2))};
}

// Splits the inside of "{...}" on top-level commas.
std::vector<std::string> split_entries(const std::string& inner) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : inner) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::pair<Rational, Rational> parse_pair(const std::string& s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw std::invalid_argument("expected '(a,b)', got '" + s + "'");
  }
  std::string inner = s.substr(1, s.size() - 2);
  auto comma = inner.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("expected '(a,b)', got '" + s + "'");
  return {parse_rational(inner.substr(0, comma)), parse_rational(inner.substr(comma + 1))};
}

Rational random_rational(std::mt19937_64& rng, int magnitude) {
  std::uniform_int_distribution<int> num(-magnitude, magnitude);
  std::uniform_int_distribution<int> den(1, 4);
  return make_rational(num(rng), den(rng));
}

Rational random_nonzero_rational(std::mt19937_64& rng, int magnitude) {
  Rational q;
  do {
    q = random_rational(rng, std::max(1, magnitude));
  } while (q == 0);
  return q;
}

}  // namespace

DecidableSet DecidableSet::finite(std::set<std::uint64_t> members) {
  DecidableSet s;
  std::ostringstream desc;
  desc << "{";
  bool first = true;
  for (auto k : members) {
    desc << (first ? "" : ",") << k;
    first = false;
  }
  desc << "}";
  s.description = desc.str();
  s.contains = [members](std::uint64_t k) { return members.count(k) != 0; };
  s.members = std::move(members);
  return s;
}

Irrational Irrational::sqrt(std::uint64_t n) {
  Integer root;
  mpz_sqrt(root.get_mpz_t(), u64(n).get_mpz_t());
  if (n < 2 || root * root == u64(n)) throw ConfigError("sqrt:" + std::to_string(n) + " is rational");
  Irrational alpha;
  alpha.description = "sqrt:" + std::to_string(n);
  alpha.below = [n](const Rational& q) { return q < 0 || q * q < u64(n); };
  return alpha;
}

Irrational Irrational::parse(const std::string& spec) {
  std::string s = strip_spaces(spec);
  if (s.rfind("sqrt:", 0) == 0) {
    std::string digits = s.substr(5);
    if (!looks_integer(digits) || digits[0] == '-') throw ConfigError("bad irrational '" + spec + "'");
    return sqrt(std::stoull(digits));
  }
  throw ConfigError("unknown irrational '" + spec + "' (expected sqrt:N)");
}

struct Model::Impl {
  Kind kind = Kind::StandardZ;
  bool product = true;
  std::optional<OrderPresentation> order;
  std::optional<ResidueSequence> residues;
  std::optional<DecidableSet> quad;
  std::optional<Irrational> alpha;
};

Model::Model(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Model Model::standard_z() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::StandardZ;
  return Model(std::move(impl));
}

Model Model::pl(const OrderPresentation& order) { return product_with_z(vl(order)); }

Model Model::vl(const OrderPresentation& order) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::PL;
  impl->product = false;
  impl->order = order;
  return Model(std::move(impl));
}

Model Model::zadjoin(const ResidueSequence& r) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::ZAdjoin;
  impl->residues = r;
  return Model(std::move(impl));
}

Model Model::quadsum(const DecidableSet& s) { return product_with_z(quadsum_divisible(s)); }

Model Model::quadsum_divisible(const DecidableSet& s) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::QuadSum;
  impl->product = false;
  impl->quad = s;
  return Model(std::move(impl));
}

Model Model::cut(const Irrational& alpha) { return product_with_z(cut_closure(alpha)); }

Model Model::cut_closure(const Irrational& alpha) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Cut;
  impl->product = false;
  impl->alpha = alpha;
  return Model(std::move(impl));
}

Model product_with_z(const Model& divisible) {
  if (divisible.has_integer_part()) throw NotPlain(divisible.describe() + " already has an integer part");
  auto impl = std::make_shared<Model::Impl>(*divisible.impl_);
  impl->product = true;
  return Model(std::move(impl));
}

Model divisible_part(const Model& product) {
  if (product.kind() == Model::Kind::StandardZ || product.kind() == Model::Kind::ZAdjoin ||
      !product.has_integer_part()) {
    throw NotPlain(product.describe() + " is not a V x Z product");
  }
  auto impl = std::make_shared<Model::Impl>(*product.impl_);
  impl->product = false;
  return Model(std::move(impl));
}

Model::Kind Model::kind() const { return impl_->kind; }

bool Model::has_integer_part() const { return impl_->product; }

std::string Model::describe() const {
  std::string body;
  switch (impl_->kind) {
    case Kind::StandardZ:
      return "Z";
    case Kind::PL:
      body = (impl_->product ? "P_L(" : "V_L(") + impl_->order->spec() + ")";
      return body;
    case Kind::ZAdjoin:
      return "Z[" + impl_->residues->description() + "]";
    case Kind::QuadSum:
      body = "V_S(" + impl_->quad->description + ")";
      return impl_->product ? body + " x Z" : body;
    case Kind::Cut:
      body = "C(1," + impl_->alpha->description + ")";
      return impl_->product ? body + " x Z" : body;
  }
  return "?";
}

const OrderPresentation& Model::order() const {
  if (!impl_->order) throw TagMismatch(describe() + " has no order");
  return *impl_->order;
}

const ResidueSequence& Model::residues() const {
  if (!impl_->residues) throw TagMismatch(describe() + " has no adjoined residue sequence");
  return *impl_->residues;
}

const DecidableSet& Model::quad_set() const {
  if (!impl_->quad) throw TagMismatch(describe() + " has no quadratic index set");
  return *impl_->quad;
}

const Irrational& Model::alpha() const {
  if (!impl_->alpha) throw TagMismatch(describe() + " has no irrational");
  return *impl_->alpha;
}

bool Model::accepts(const GroupElement& x) const {
  if (x.index() != expected_tag(impl_->kind)) return false;
  return std::visit(
      [this](const auto& e) -> bool {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ZInt>) {
          return true;
        } else if constexpr (std::is_same_v<T, PLElem>) {
          if (!impl_->product && e.z != 0) return false;
          for (const auto& [l, q] : e.support) {
            if (q == 0 || !impl_->order->contains(l)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ZAdjoinElem>) {
          if (e.n <= 0) return false;
          if (e.z == 0) return e.n == 1;
          return gcd(e.z, e.n) == 1;
        } else if constexpr (std::is_same_v<T, QuadSumElem>) {
          if (!impl_->product && e.z != 0) return false;
          for (const auto& [n, c] : e.coords) {
            if (c.a == 0 && c.b == 0) return false;
            if (c.b != 0 && !impl_->quad->contains(n)) return false;
          }
          return true;
        } else {
          return impl_->product || e.z == 0;
        }
      },
      x);
}

void Model::check(const GroupElement& x) const {
  if (x.index() != expected_tag(impl_->kind)) {
    throw TagMismatch(std::string(tag_name(x.index())) + " passed to " + describe());
  }
  if (!accepts(x)) throw TagMismatch("malformed " + std::string(tag_name(x.index())) + " for " + describe());
}

GroupElement Model::zero() const {
  switch (impl_->kind) {
    case Kind::StandardZ:
      return ZInt{0};
    case Kind::PL:
      return PLElem{};
    case Kind::ZAdjoin:
      return ZAdjoinElem{};
    case Kind::QuadSum:
      return QuadSumElem{};
    case Kind::Cut:
      return CutElem{};
  }
  return ZInt{0};
}

GroupElement Model::one() const { return from_integer(1); }

GroupElement Model::from_integer(const Integer& k) const {
  if (!impl_->product) throw NotPlain(describe() + " has no distinguished 1");
  switch (impl_->kind) {
    case Kind::StandardZ:
      return ZInt{k};
    case Kind::PL:
      return PLElem{{}, k};
    case Kind::ZAdjoin:
      return ZAdjoinElem{k, 0, 1};
    case Kind::QuadSum:
      return QuadSumElem{{}, k};
    case Kind::Cut:
      return CutElem{0, 0, k};
  }
  return ZInt{k};
}

GroupElement Model::adjoined() const {
  if (impl_->kind != Kind::ZAdjoin) throw TagMismatch(describe() + " has no adjoined element");
  return ZAdjoinElem{0, 1, 1};
}

ZAdjoinElem Model::zadjoin_canonical(const Integer& a, const Integer& z, const Integer& n) const {
  if (n <= 0) throw std::invalid_argument("ZAdjoin denominator must be positive");
  if (z == 0) return ZAdjoinElem{a, 0, 1};
  Integer g = gcd(z, n);
  Integer zr = z / g;
  Integer nr = n / g;
  if (nr == n) return ZAdjoinElem{a, z, n};
  const auto& r = residues();
  // a + z'(X - r_n)/n' = a + z'(X - r_n')/n' - z'(r_n - r_n')/n'
  Integer shift = r.query(n) - r.query(nr);
  return ZAdjoinElem{a - zr * (shift / nr), zr, nr};
}

std::pair<Rational, Rational> Model::zadjoin_formal(const ZAdjoinElem& x) const {
  Rational c = make_rational(x.z, x.n);
  Rational d = Rational(x.a) - make_rational(x.z * residues().query(x.n), x.n);
  return {c, d};
}

std::optional<ZAdjoinElem> Model::zadjoin_from_formal(const Rational& c, const Rational& d) const {
  if (c == 0) {
    if (d.get_den() != 1) return std::nullopt;
    return ZAdjoinElem{d.get_num(), 0, 1};
  }
  Integer z = c.get_num();
  Integer n = c.get_den();
  Rational a = d + make_rational(z * residues().query(n), n);
  if (a.get_den() != 1) return std::nullopt;
  return ZAdjoinElem{a.get_num(), z, n};
}

GroupElement Model::add(const GroupElement& x, const GroupElement& y) const {
  check(x);
  check(y);
  switch (impl_->kind) {
    case Kind::StandardZ:
      return ZInt{std::get<ZInt>(x).value + std::get<ZInt>(y).value};
    case Kind::PL: {
      PLElem out = std::get<PLElem>(x);
      for (const auto& [l, q] : std::get<PLElem>(y).support) {
        out.support[l] += q;
        drop_zero(out.support, l);
      }
      out.z += std::get<PLElem>(y).z;
      return out;
    }
    case Kind::ZAdjoin: {
      const auto& u = std::get<ZAdjoinElem>(x);
      const auto& v = std::get<ZAdjoinElem>(y);
      const auto& r = residues();
      Integer nm = u.n * v.n;
      Integer r_nm = r.query(nm);
      Integer a = u.a + v.a + ((r_nm - r.query(u.n)) / u.n) * u.z + ((r_nm - r.query(v.n)) / v.n) * v.z;
      Integer z = v.n * u.z + u.n * v.z;
      return zadjoin_canonical(a, z, nm);
    }
    case Kind::QuadSum: {
      QuadSumElem out = std::get<QuadSumElem>(x);
      for (const auto& [n, c] : std::get<QuadSumElem>(y).coords) {
        auto& slot = out.coords[n];
        slot.a += c.a;
        slot.b += c.b;
        if (slot.a == 0 && slot.b == 0) out.coords.erase(n);
      }
      out.z += std::get<QuadSumElem>(y).z;
      return out;
    }
    case Kind::Cut: {
      const auto& u = std::get<CutElem>(x);
      const auto& v = std::get<CutElem>(y);
      return CutElem{u.a + v.a, u.b + v.b, u.z + v.z};
    }
  }
  return x;
}

GroupElement Model::neg(const GroupElement& x) const { return scale(-1, x); }

GroupElement Model::sub(const GroupElement& x, const GroupElement& y) const { return add(x, neg(y)); }

GroupElement Model::scale(const Integer& k, const GroupElement& x) const {
  check(x);
  if (k == 0) return zero();
  switch (impl_->kind) {
    case Kind::StandardZ:
      return ZInt{k * std::get<ZInt>(x).value};
    case Kind::PL: {
      PLElem out = std::get<PLElem>(x);
      for (auto& [l, q] : out.support) q *= k;
      out.z *= k;
      return out;
    }
    case Kind::ZAdjoin: {
      auto [c, d] = zadjoin_formal(std::get<ZAdjoinElem>(x));
      return *zadjoin_from_formal(c * k, d * k);
    }
    case Kind::QuadSum: {
      QuadSumElem out = std::get<QuadSumElem>(x);
      for (auto& [n, c] : out.coords) {
        c.a *= k;
        c.b *= k;
      }
      out.z *= k;
      return out;
    }
    case Kind::Cut: {
      CutElem out = std::get<CutElem>(x);
      out.a *= k;
      out.b *= k;
      out.z *= k;
      return out;
    }
  }
  return x;
}

int Model::sign(const GroupElement& x) const {
  check(x);
  switch (impl_->kind) {
    case Kind::StandardZ:
      return presb::sign(std::get<ZInt>(x).value);
    case Kind::PL: {
      const auto& e = std::get<PLElem>(x);
      if (e.support.empty()) return presb::sign(e.z);
      const auto& ord = *impl_->order;
      auto lead = e.support.begin();
      for (auto it = std::next(lead); it != e.support.end(); ++it) {
        if (ord.less(lead->first, it->first)) lead = it;
      }
      return presb::sign(lead->second);
    }
    case Kind::ZAdjoin: {
      const auto& e = std::get<ZAdjoinElem>(x);
      if (e.z != 0) return presb::sign(e.z);
      return presb::sign(e.a);
    }
    case Kind::QuadSum: {
      const auto& e = std::get<QuadSumElem>(x);
      if (e.coords.empty()) return presb::sign(e.z);
      const auto& [n, c] = *e.coords.rbegin();
      return quad_sign(c, nth_prime(n));
    }
    case Kind::Cut: {
      const auto& e = std::get<CutElem>(x);
      if (e.b == 0) {
        if (e.a != 0) return presb::sign(e.a);
        return presb::sign(e.z);
      }
      // a + b alpha > 0  <=>  alpha > -a/b (b > 0)  or  alpha < -a/b (b < 0)
      bool cut_below = impl_->alpha->below(Rational(-e.a / e.b));
      if (e.b > 0) return cut_below ? 1 : -1;
      return cut_below ? -1 : 1;
    }
  }
  return 0;
}

bool Model::is_zero(const GroupElement& x) const { return x == zero(); }

std::strong_ordering Model::compare(const GroupElement& x, const GroupElement& y) const {
  int s = sign(sub(x, y));
  return s <=> 0;
}

Integer Model::residue(const GroupElement& x, const Integer& n) const {
  check(x);
  if (n <= 0) throw std::invalid_argument("residue modulus must be positive");
  if (!impl_->product) return 0;
  switch (impl_->kind) {
    case Kind::StandardZ:
      return mod_floor(std::get<ZInt>(x).value, n);
    case Kind::ZAdjoin: {
      const auto& e = std::get<ZAdjoinElem>(x);
      const auto& r = residues();
      Integer step = (r.query(e.n * n) - r.query(e.n)) / e.n;
      return mod_floor(e.a + e.z * step, n);
    }
    case Kind::PL:
      return mod_floor(std::get<PLElem>(x).z, n);
    case Kind::QuadSum:
      return mod_floor(std::get<QuadSumElem>(x).z, n);
    case Kind::Cut:
      return mod_floor(std::get<CutElem>(x).z, n);
  }
  return 0;
}

std::optional<GroupElement> Model::solve_div(const GroupElement& x, const Integer& n) const {
  if (n <= 0) throw std::invalid_argument("divisor must be positive");
  if (residue(x, n) != 0) return std::nullopt;
  if (impl_->kind == Kind::ZAdjoin) {
    auto [c, d] = zadjoin_formal(std::get<ZAdjoinElem>(x));
    auto y = zadjoin_from_formal(c / n, d / n);
    if (!y) throw std::logic_error("residue 0 but no quotient in " + describe());
    return GroupElement(*y);
  }
  return scalar_q(make_rational(1, n), x);
}

GroupElement Model::scalar_q(const Rational& q, const GroupElement& x) const {
  check(x);
  auto fail = [&]() -> GroupElement {
    throw NotDivisible(to_string(q) + " * " + format(x) + " is not in " + describe());
  };
  switch (impl_->kind) {
    case Kind::StandardZ: {
      Rational v = q * std::get<ZInt>(x).value;
      if (v.get_den() != 1) return fail();
      return ZInt{v.get_num()};
    }
    case Kind::ZAdjoin: {
      auto [c, d] = zadjoin_formal(std::get<ZAdjoinElem>(x));
      auto y = zadjoin_from_formal(c * q, d * q);
      if (!y) return fail();
      return *y;
    }
    case Kind::PL: {
      PLElem out = std::get<PLElem>(x);
      Rational z = q * out.z;
      if (z.get_den() != 1) return fail();
      for (auto& [l, v] : out.support) v *= q;
      if (q == 0) out.support.clear();
      out.z = z.get_num();
      return out;
    }
    case Kind::QuadSum: {
      QuadSumElem out = std::get<QuadSumElem>(x);
      Rational z = q * out.z;
      if (z.get_den() != 1) return fail();
      for (auto& [n, c] : out.coords) {
        c.a *= q;
        c.b *= q;
      }
      if (q == 0) out.coords.clear();
      out.z = z.get_num();
      return out;
    }
    case Kind::Cut: {
      CutElem out = std::get<CutElem>(x);
      Rational z = q * out.z;
      if (z.get_den() != 1) return fail();
      out.a *= q;
      out.b *= q;
      out.z = z.get_num();
      return out;
    }
  }
  return x;
}

std::pair<GroupElement, Integer> Model::decompose_plain(const GroupElement& x) const {
  check(x);
  if (!impl_->product) throw NotPlain(describe() + " is a divisible group, not a Presburger group");
  switch (impl_->kind) {
    case Kind::StandardZ:
      return {ZInt{0}, std::get<ZInt>(x).value};
    case Kind::ZAdjoin: {
      auto witness = residues().integer_witness();
      if (!witness) throw NotPlain(describe() + " has no integer with the residue sequence of X");
      auto [c, d] = zadjoin_formal(std::get<ZAdjoinElem>(x));
      // x = c (X - k) + (d + c k)
      Rational integer_part = d + c * *witness;
      auto v = zadjoin_from_formal(c, -c * *witness);
      if (!v || integer_part.get_den() != 1) throw std::logic_error("plain decomposition left the group");
      return {GroupElement(*v), integer_part.get_num()};
    }
    case Kind::PL: {
      PLElem v = std::get<PLElem>(x);
      Integer z = v.z;
      v.z = 0;
      return {v, z};
    }
    case Kind::QuadSum: {
      QuadSumElem v = std::get<QuadSumElem>(x);
      Integer z = v.z;
      v.z = 0;
      return {v, z};
    }
    case Kind::Cut: {
      CutElem v = std::get<CutElem>(x);
      Integer z = v.z;
      v.z = 0;
      return {v, z};
    }
  }
  return {x, 0};
}

bool Model::in_divisible_part(const GroupElement& x) const {
  check(x);
  if (!impl_->product) return true;
  switch (impl_->kind) {
    case Kind::StandardZ:
      return std::get<ZInt>(x).value == 0;
    case Kind::ZAdjoin: {
      auto [c, d] = zadjoin_formal(std::get<ZAdjoinElem>(x));
      if (auto k = residues().integer_witness()) return d == -c * *k;
      return c == 0 && d == 0;
    }
    case Kind::PL:
      return std::get<PLElem>(x).z == 0;
    case Kind::QuadSum:
      return std::get<QuadSumElem>(x).z == 0;
    case Kind::Cut:
      return std::get<CutElem>(x).z == 0;
  }
  return false;
}

Coordinates Model::coordinates(const GroupElement& x) const {
  check(x);
  Coordinates out;
  auto put = [&out](CoordKey key, const Rational& v) {
    if (v != 0) out[key] = v;
  };
  switch (impl_->kind) {
    case Kind::StandardZ:
      put({CoordKey::One, 0}, std::get<ZInt>(x).value);
      break;
    case Kind::PL: {
      const auto& e = std::get<PLElem>(x);
      for (const auto& [l, q] : e.support) put({CoordKey::PLBasis, l}, q);
      put({CoordKey::One, 0}, e.z);
      break;
    }
    case Kind::ZAdjoin: {
      auto [c, d] = zadjoin_formal(std::get<ZAdjoinElem>(x));
      put({CoordKey::Adjoined, 0}, c);
      put({CoordKey::One, 0}, d);
      break;
    }
    case Kind::QuadSum: {
      const auto& e = std::get<QuadSumElem>(x);
      for (const auto& [n, c] : e.coords) {
        put({CoordKey::QuadRational, n}, c.a);
        put({CoordKey::QuadRoot, n}, c.b);
      }
      put({CoordKey::One, 0}, e.z);
      break;
    }
    case Kind::Cut: {
      const auto& e = std::get<CutElem>(x);
      put({CoordKey::CutUnit, 0}, e.a);
      put({CoordKey::Alpha, 0}, e.b);
      put({CoordKey::One, 0}, e.z);
      break;
    }
  }
  return out;
}

GroupElement Model::parse_element(const std::string& raw) const {
  std::string text = strip_spaces(raw);
  auto bad = [&](const std::string& why) -> GroupElement {
    throw ConfigError("bad element literal '" + raw + "' for " + describe() + ": " + why);
  };
  try {
    if (looks_integer(text)) return from_integer(parse_integer(text));
    switch (impl_->kind) {
      case Kind::StandardZ:
        return bad("expected an integer");
      case Kind::ZAdjoin: {
        if (auto at = text.find('X'); at != std::string::npos) {
          // [k*]X[+c|-c]
          std::string head = text.substr(0, at), rest = text.substr(at + 1);
          Integer k = 1;
          if (head == "-") {
            k = -1;
          } else if (!head.empty()) {
            if (head.back() != '*' || !looks_integer(head.substr(0, head.size() - 1))) return bad("expected k*X");
            k = parse_integer(head.substr(0, head.size() - 1));
          }
          GroupElement x = scale(k, adjoined());
          if (rest.empty()) return x;
          if (!looks_integer(rest) || (rest[0] != '+' && rest[0] != '-')) return bad("expected X+c or X-c");
          return add(x, from_integer(parse_integer(rest)));
        }
        Integer a = 0, z = 0, n = 1;
        for (const auto& entry : split_entries(text)) {
          auto eq = entry.find('=');
          if (eq == std::string::npos) return bad("expected key=value");
          std::string key = entry.substr(0, eq);
          Integer value = parse_integer(entry.substr(eq + 1));
          if (key == "a") {
            a = value;
          } else if (key == "z") {
            z = value;
          } else if (key == "n") {
            n = value;
          } else {
            return bad("unknown key '" + key + "'");
          }
        }
        if (n <= 0) return bad("n must be positive");
        return zadjoin_canonical(a, z, n);
      }
      case Kind::PL: {
        auto [body, z] = split_integer_part(text);
        if (body.size() < 2 || body.front() != '{' || body.back() != '}') return bad("expected {...}");
        PLElem e;
        for (const auto& entry : split_entries(body.substr(1, body.size() - 2))) {
          auto colon = entry.find(':');
          if (colon == std::string::npos) return bad("expected index:value");
          std::string key = entry.substr(0, colon);
          if (!key.empty() && key[0] == 'l') key.erase(0, 1);
          if (!looks_integer(key) || key[0] == '-') return bad("bad order index '" + key + "'");
          OrderIndex l = std::stoull(key);
          Rational q = parse_rational(entry.substr(colon + 1));
          e.support[l] += q;
          drop_zero(e.support, l);
        }
        e.z = z;
        check(e);
        return e;
      }
      case Kind::QuadSum: {
        auto [body, z] = split_integer_part(text);
        if (body.size() < 2 || body.front() != '{' || body.back() != '}') return bad("expected {...}");
        QuadSumElem e;
        for (const auto& entry : split_entries(body.substr(1, body.size() - 2))) {
          auto colon = entry.find(':');
          if (colon == std::string::npos) return bad("expected n:(a,b)");
          std::string key = entry.substr(0, colon);
          if (!looks_integer(key) || key[0] == '-') return bad("bad coordinate '" + key + "'");
          auto [a, b] = parse_pair(entry.substr(colon + 1));
          if (a != 0 || b != 0) e.coords[std::stoull(key)] = QuadCoord{a, b};
        }
        e.z = z;
        check(e);
        return e;
      }
      case Kind::Cut: {
        auto [body, z] = split_integer_part(text);
        auto [a, b] = parse_pair(body);
        CutElem e{a, b, z};
        check(e);
        return e;
      }
    }
  } catch (const TagMismatch& e) {
    return bad(e.what());
  } catch (const std::invalid_argument& e) {
    return bad(e.what());
  }
  return bad("unsupported model");
}

std::string Model::format(const GroupElement& x) const {
  std::ostringstream out;
  auto tail = [&](const Integer& z) {
    if (impl_->product) out << ";z=" << z.get_str();
  };
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ZInt>) {
          out << e.value.get_str();
        } else if constexpr (std::is_same_v<T, PLElem>) {
          out << "{";
          bool first = true;
          for (const auto& [l, q] : e.support) {
            out << (first ? "" : ",") << "l" << l << ":" << to_string(q);
            first = false;
          }
          out << "}";
          tail(e.z);
        } else if constexpr (std::is_same_v<T, ZAdjoinElem>) {
          out << "a=" << e.a.get_str() << ",z=" << e.z.get_str() << ",n=" << e.n.get_str();
        } else if constexpr (std::is_same_v<T, QuadSumElem>) {
          out << "{";
          bool first = true;
          for (const auto& [n, c] : e.coords) {
            out << (first ? "" : ",") << n << ":(" << to_string(c.a) << "," << to_string(c.b) << ")";
            first = false;
          }
          out << "}";
          tail(e.z);
        } else {
          out << "(" << to_string(e.a) << "," << to_string(e.b) << ")";
          tail(e.z);
        }
      },
      x);
  return out.str();
}

GroupElement Model::random_element(std::mt19937_64& rng, int magnitude) const {
  std::uniform_int_distribution<int> small(-magnitude, magnitude);
  Integer z = impl_->product ? Integer(small(rng)) : Integer(0);
  switch (impl_->kind) {
    case Kind::StandardZ:
      return ZInt{z};
    case Kind::ZAdjoin: {
      std::uniform_int_distribution<int> den(1, 6);
      return zadjoin_canonical(small(rng), small(rng), den(rng));
    }
    case Kind::PL: {
      std::vector<OrderIndex> pool;
      if (impl_->order->is_finite()) {
        pool = impl_->order->elements();
      } else {
        for (OrderIndex i = 0; pool.size() < 8; ++i) {
          if (impl_->order->contains(i)) pool.push_back(i);
        }
      }
      PLElem e;
      e.z = z;
      if (pool.empty()) return e;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::uniform_int_distribution<int> count(0, static_cast<int>(std::min<std::size_t>(pool.size(), 3)));
      int k = count(rng);
      for (int i = 0; i < k; ++i) e.support[pool[pick(rng)]] = random_nonzero_rational(rng, magnitude);
      return e;
    }
    case Kind::QuadSum: {
      std::vector<std::uint64_t> pool;
      const auto& s = *impl_->quad;
      if (s.members) pool.assign(s.members->begin(), s.members->end());
      for (std::uint64_t n = 0; n < 4; ++n) pool.push_back(n);
      QuadSumElem e;
      e.z = z;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::uniform_int_distribution<int> count(0, 2);
      int k = count(rng);
      for (int i = 0; i < k; ++i) {
        std::uint64_t n = pool[pick(rng)];
        QuadCoord c{random_rational(rng, magnitude), s.contains(n) ? random_rational(rng, magnitude) : Rational(0)};
        if (c.a == 0 && c.b == 0) c.a = 1;
        e.coords[n] = c;
      }
      return e;
    }
    case Kind::Cut:
      return CutElem{random_rational(rng, magnitude), random_rational(rng, magnitude), z};
  }
  return zero();
}

std::vector<GroupElement> quotient_by_standard(const Model& m, const std::vector<GroupElement>& elements) {
  Model v = divisible_part(m);
  std::vector<GroupElement> out;
  out.reserve(elements.size());
  for (const auto& x : elements) out.push_back(m.decompose_plain(x).first);
  return out;
}

GroupElement pi_embed(const Model& m, OrderIndex l) {
  if (m.kind() != Model::Kind::PL) throw TagMismatch("pi_embed needs a P_L model, got " + m.describe());
  if (!m.order().contains(l)) throw OutOfDomain("index " + std::to_string(l) + " not in " + m.order().spec());
  PLElem e;
  e.support[l] = 1;
  return e;
}

TauDecomposition tau_decompose(const Model& m, const GroupElement& p) {
  if (m.kind() != Model::Kind::PL) throw TagMismatch("tau_decompose needs a P_L model, got " + m.describe());
  m.check(p);
  const auto& e = std::get<PLElem>(p);
  TauDecomposition out;
  for (const auto& [l, q] : e.support) out.indices.push_back(l);
  const auto& ord = m.order();
  std::sort(out.indices.begin(), out.indices.end(), [&ord](OrderIndex a, OrderIndex b) { return ord.less(a, b); });
  for (auto l : out.indices) out.coefficients.push_back(e.support.at(l));
  out.z = e.z;
  return out;
}

GroupElement t_p(const Model& m, const TauDecomposition& shape, const std::vector<OrderIndex>& at) {
  if (at.size() != shape.coefficients.size()) {
    throw std::invalid_argument("t_p expects " + std::to_string(shape.coefficients.size()) + " indices");
  }
  GroupElement out = m.from_integer(shape.z);
  for (std::size_t i = 0; i < at.size(); ++i) {
    out = m.add(out, m.scalar_q(shape.coefficients[i], pi_embed(m, at[i])));
  }
  return out;
}

Model model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("model config needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const bool divisible = j.value("divisible", false);
  auto members = [&j]() {
    std::set<std::uint64_t> s;
    if (!j.contains("set")) throw ConfigError("model config needs a \"set\"");
    for (const auto& m : j.at("set")) {
      if (!m.is_number_integer() || m.get<long>() < 0) throw ConfigError("set members must be naturals");
      s.insert(m.get<std::uint64_t>());
    }
    return s;
  };
  if (kind == "z") {
    if (divisible) throw ConfigError("Z has no divisible form");
    return Model::standard_z();
  }
  if (kind == "pl") {
    if (!j.contains("order")) throw ConfigError("pl model needs an \"order\"");
    auto ord = OrderPresentation::parse(j.at("order").get<std::string>());
    return divisible ? Model::vl(ord) : Model::pl(ord);
  }
  if (kind == "zadjoin") {
    if (divisible) throw ConfigError("zadjoin has no divisible form");
    if (j.contains("sequence")) return Model::zadjoin(residue_from_json(j.at("sequence")));
    return Model::zadjoin(encode_set(members()));
  }
  if (kind == "quadsum") {
    auto s = DecidableSet::finite(members());
    return divisible ? Model::quadsum_divisible(s) : Model::quadsum(s);
  }
  if (kind == "cut") {
    if (!j.contains("alpha")) throw ConfigError("cut model needs an \"alpha\"");
    auto alpha = Irrational::parse(j.at("alpha").get<std::string>());
    return divisible ? Model::cut_closure(alpha) : Model::cut(alpha);
  }
  throw ConfigError("unknown model kind '" + kind + "'");
}

nlohmann::json to_json(const Model& m) {
  nlohmann::json j;
  j["kind"] = kind_name(m.kind());
  switch (m.kind()) {
    case Model::Kind::StandardZ:
      break;
    case Model::Kind::PL:
      j["order"] = m.order().spec();
      break;
    case Model::Kind::ZAdjoin: {
      const auto& r = m.residues();
      if (r.finite_members() && r.shift() == 0) {
        j["set"] = *r.finite_members();
      } else {
        j["sequence"] = to_json(r);
      }
      break;
    }
    case Model::Kind::QuadSum:
      if (!m.quad_set().members) throw ConfigError("quadsum set has no finite member list");
      j["set"] = *m.quad_set().members;
      break;
    case Model::Kind::Cut:
      j["alpha"] = m.alpha().description;
      break;
  }
  if (m.is_divisible()) j["divisible"] = true;
  return j;
}

}  // namespace presb
