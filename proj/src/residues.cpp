#include "presb/residues.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "presb/error.hpp"

namespace presb {

namespace {

class PrimeTable {
 public:
  std::uint64_t nth(std::size_t k) {
    std::lock_guard lock(mu_);
    while (primes_.size() <= k) grow();
    return primes_[k];
  }

  std::optional<std::size_t> index_of(std::uint64_t p) {
    if (p < 2) return std::nullopt;
    std::lock_guard lock(mu_);
    while (limit_ < p) grow();
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - primes_.begin());
  }

 private:
  void grow() {
    std::uint64_t next = limit_ == 0 ? 1024 : limit_ * 2;
    if (next > (std::uint64_t{1} << 32)) throw std::overflow_error("prime table limit exceeded");
    std::vector<bool> composite(next + 1, false);
    primes_.clear();
    for (std::uint64_t i = 2; i <= next; ++i) {
      if (composite[i]) continue;
      primes_.push_back(i);
      for (std::uint64_t j = i * i; j <= next; j += i) composite[j] = true;
    }
    limit_ = next;
  }

  std::mutex mu_;
  std::vector<std::uint64_t> primes_;
  std::uint64_t limit_ = 0;
};

PrimeTable& primes() {
  static PrimeTable table;
  return table;
}

Integer to_integer(std::uint64_t n) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(n), 0, 0, &n);
  return z;
}

}  // namespace

std::uint64_t nth_prime(std::size_t k) { return primes().nth(k); }

std::optional<std::size_t> prime_index(std::uint64_t p) { return primes().index_of(p); }

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1u);
  return out;
}

Integer crt(const std::vector<std::pair<Integer, Integer>>& congruences) {
  Integer x = 0;
  Integer modulus = 1;
  for (const auto& [r, m] : congruences) {
    // x + modulus * t = r (mod m)  =>  t = (r - x) * modulus^{-1} (mod m)
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), m.get_mpz_t()) == 0 && m != 1) {
      throw std::invalid_argument("crt: moduli are not coprime");
    }
    Integer t = m == 1 ? Integer(0) : mod_floor((r - x) * inv, m);
    x += modulus * t;
    modulus *= m;
  }
  return mod_floor(x, modulus);
}

struct ResidueSequence::Impl {
  Kind kind = Kind::Custom;
  std::string description;
  Query base;
  std::optional<std::set<std::uint64_t>> members;
  std::optional<Integer> witness;
  Integer shift = 0;

  mutable std::mutex mu;
  mutable std::unordered_map<std::uint64_t, std::uint64_t> memo;

  std::uint64_t query(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("residue query with modulus 0");
    {
      std::lock_guard lock(mu);
      if (auto it = memo.find(n); it != memo.end()) return it->second;
    }
    std::uint64_t r = base(n);
    if (shift != 0) r = mod_floor(to_integer(r) + shift, n);
    std::lock_guard lock(mu);
    memo.emplace(n, r);
    return r;
  }
};

ResidueSequence::ResidueSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ResidueSequence ResidueSequence::of_integer(const presb::Integer& z) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Integer;
  impl->description = "int:" + z.get_str();
  impl->witness = z;
  impl->base = [z](std::uint64_t n) { return mod_floor(z, n); };
  return ResidueSequence(std::move(impl));
}

namespace {

ResidueSequence::Query set_query(std::function<bool(std::uint64_t)> prime_in_set) {
  return [prime_in_set = std::move(prime_in_set)](std::uint64_t n) -> std::uint64_t {
    if (n == 1) return 0;
    std::vector<std::pair<Integer, Integer>> congruences;
    for (auto [p, e] : factorize(n)) {
      Integer pe = 1;
      for (unsigned i = 0; i < e; ++i) pe *= to_integer(p);
      congruences.emplace_back(prime_in_set(p) ? 1 : 0, pe);
    }
    return to_u64(crt(congruences));
  };
}

}  // namespace

ResidueSequence ResidueSequence::encode_set(std::set<std::uint64_t> members) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::EncodedSet;
  std::ostringstream desc;
  desc << "set:{";
  bool first = true;
  for (auto k : members) {
    desc << (first ? "" : ",") << k;
    first = false;
  }
  desc << "}";
  impl->description = desc.str();
  if (members.empty()) impl->witness = Integer(0);
  std::set<std::uint64_t> member_primes;
  for (auto k : members) member_primes.insert(nth_prime(k));
  impl->members = std::move(members);
  impl->base = set_query([member_primes](std::uint64_t p) { return member_primes.count(p) != 0; });
  return ResidueSequence(std::move(impl));
}

ResidueSequence ResidueSequence::encode_set(Membership member, std::string description) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::EncodedSet;
  impl->description = std::move(description);
  impl->base = set_query([member = std::move(member)](std::uint64_t p) {
    auto k = prime_index(p);
    return k.has_value() && member(*k);
  });
  return ResidueSequence(std::move(impl));
}

ResidueSequence ResidueSequence::custom(Query query, std::string description) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Custom;
  impl->description = std::move(description);
  impl->base = std::move(query);
  return ResidueSequence(std::move(impl));
}

std::uint64_t ResidueSequence::query(std::uint64_t n) const { return impl_->query(n); }

presb::Integer ResidueSequence::query(const presb::Integer& n) const {
  return to_integer(impl_->query(to_u64(n)));
}

ResidueSequence::Kind ResidueSequence::kind() const { return impl_->kind; }

const std::string& ResidueSequence::description() const { return impl_->description; }

std::optional<std::set<std::uint64_t>> ResidueSequence::finite_members() const { return impl_->members; }

std::optional<presb::Integer> ResidueSequence::integer_witness() const {
  if (!impl_->witness) return std::nullopt;
  return *impl_->witness + impl_->shift;
}

const presb::Integer& ResidueSequence::shift() const { return impl_->shift; }

ResidueSequence ResidueSequence::shifted(const presb::Integer& t) const {
  auto impl = std::make_shared<Impl>();
  impl->kind = impl_->kind;
  impl->description = impl_->description;
  impl->base = impl_->base;
  impl->members = impl_->members;
  impl->witness = impl_->witness;
  impl->shift = impl_->shift + t;
  if (impl->shift != 0) impl->description += "+" + impl->shift.get_str();
  return ResidueSequence(std::move(impl));
}

ResidueSequence residue_of_integer(const Integer& z) { return ResidueSequence::of_integer(z); }

ResidueSequence encode_set(const std::set<std::uint64_t>& members) {
  return ResidueSequence::encode_set(members);
}

std::set<std::uint64_t> decode_set(const ResidueSequence& r, std::uint64_t k_max) {
  std::set<std::uint64_t> out;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    std::uint64_t p = nth_prime(k);
    std::uint64_t bit = r.query(p);
    if (bit > 1) {
      throw MalformedSequence("r_" + std::to_string(p) + " = " + std::to_string(bit) +
                              " is not 0 or 1 (prime index " + std::to_string(k) + ")");
    }
    if (bit == 1) out.insert(k);
  }
  return out;
}

CoherenceVerdict check_coherence(const ResidueSequence& r, std::uint64_t bound) {
  CoherenceVerdict v;
  for (std::uint64_t j = 1; j <= bound; ++j) {
    std::uint64_t rj = r.query(j);
    if (rj >= j || (j == 1 && rj != 0)) {
      v.coherent = false;
      v.violation = {j, j};
      v.detail = "r_" + std::to_string(j) + " = " + std::to_string(rj) + " out of range";
      return v;
    }
    for (std::uint64_t i = 1; i < j; ++i) {
      if (j % i != 0) continue;
      std::uint64_t ri = r.query(i);
      if (rj % i != ri) {
        v.coherent = false;
        v.violation = {i, j};
        v.detail = "r_" + std::to_string(j) + " = " + std::to_string(rj) + " is not congruent to r_" +
                   std::to_string(i) + " = " + std::to_string(ri) + " mod " + std::to_string(i);
        return v;
      }
    }
  }
  return v;
}

std::string residue_table(const ResidueSequence& r, std::uint64_t bound) {
  std::ostringstream out;
  for (std::uint64_t n = 1; n <= bound; ++n) out << n << ": " << r.query(n) << "\n";
  return out.str();
}

nlohmann::json to_json(const ResidueSequence& r) {
  nlohmann::json j;
  if (auto members = r.finite_members()) {
    j["kind"] = "set";
    j["members"] = *members;
    if (r.shift() != 0) j["shift"] = r.shift().get_str();
    return j;
  }
  if (r.kind() == ResidueSequence::Kind::Integer) {
    Integer z = *r.integer_witness();
    j["kind"] = "int";
    if (z.fits_slong_p()) {
      j["value"] = z.get_si();
    } else {
      j["value"] = z.get_str();
    }
    return j;
  }
  throw ConfigError("sequence '" + r.description() + "' has no JSON form");
}

ResidueSequence residue_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("residue sequence JSON needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "int") {
    const auto& v = j.at("value");
    Integer z = v.is_string() ? parse_integer(v.get<std::string>()) : Integer(v.get<long>());
    return ResidueSequence::of_integer(z);
  }
  if (kind == "set") {
    std::set<std::uint64_t> members;
    for (const auto& m : j.at("members")) {
      if (!m.is_number_unsigned() && !(m.is_number_integer() && m.get<long>() >= 0)) {
        throw ConfigError("set members must be naturals");
      }
      members.insert(m.get<std::uint64_t>());
    }
    auto r = ResidueSequence::encode_set(std::move(members));
    if (j.contains("shift")) {
      const auto& s = j.at("shift");
      r = r.shifted(s.is_string() ? parse_integer(s.get<std::string>()) : Integer(s.get<long>()));
    }
    return r;
  }
  throw ConfigError("unknown residue sequence kind '" + kind + "'");
}

}  // namespace presb
