#include <doctest.h>

#include <random>

#include "presb/error.hpp"
#include "presb/residues.hpp"

using namespace presb;

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Smallest x in [0, n) satisfying x = [p in S] mod p^e for every prime power in n.
std::uint64_t brute_encoding(std::uint64_t n, const std::set<std::uint64_t>& primes_in_set) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> parts;
  std::uint64_t m = n;
  for (std::uint64_t p = 2; p <= m; ++p) {
    if (m % p) continue;
    std::uint64_t q = 1;
    while (m % p == 0) {
      m /= p;
      q *= p;
    }
    parts.push_back({p, q});
  }
  for (std::uint64_t x = 0; x < n; ++x) {
    bool ok = true;
    for (auto [p, q] : parts) ok = ok && x % q == (primes_in_set.count(p) ? 1u : 0u);
    if (ok) return x;
  }
  return n;
}

}  // namespace

TEST_CASE("primes and their indices") {
  CHECK(nth_prime(0) == 2);
  CHECK(nth_prime(4) == 11);
  std::size_t k = 0;
  for (std::uint64_t n = 2; n < 3000; ++n) {
    if (!is_prime(n)) {
      CHECK_FALSE(prime_index(n).has_value());
      continue;
    }
    REQUIRE(prime_index(n).has_value());
    CHECK(*prime_index(n) == k);
    CHECK(nth_prime(k) == n);
    ++k;
  }
}

TEST_CASE("factorize multiplies back") {
  for (std::uint64_t n = 1; n < 2000; ++n) {
    std::uint64_t prod = 1;
    for (auto [p, e] : factorize(n)) {
      CHECK(is_prime(p));
      for (unsigned i = 0; i < e; ++i) prod *= p;
    }
    CHECK(prod == n);
  }
}

TEST_CASE("crt agrees with search") {
  std::vector<std::pair<Integer, Integer>> c{{2, 3}, {3, 5}, {2, 7}};
  CHECK(crt(c) == 23);
}

TEST_CASE("set encoding matches brute-force CRT") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::set<std::uint64_t> members;
    for (std::uint64_t k = 0; k < 8; ++k)
      if (rng() % 2) members.insert(k);
    std::set<std::uint64_t> primes_in_set;
    for (auto k : members) primes_in_set.insert(nth_prime(k));
    auto r = encode_set(members);
    for (std::uint64_t n = 1; n <= 300; ++n) CHECK(r.query(n) == brute_encoding(n, primes_in_set));
    CHECK(decode_set(r, 30) == members);
    CHECK(check_coherence(r, 200).coherent);
  }
}

TEST_CASE("encoding of {0} starts 0,1,0,1,...") {
  auto r = encode_set({0});
  std::vector<std::uint64_t> expect{0, 1, 0, 1, 0, 3, 0, 1};
  for (std::uint64_t n = 1; n <= expect.size(); ++n) CHECK(r.query(n) == expect[n - 1]);
  CHECK(residue_table(r, 3) == "1: 0\n2: 1\n3: 0\n");
}

TEST_CASE("infinite decidable set encoding decodes back") {
  auto r = ResidueSequence::encode_set([](std::uint64_t k) { return k % 3 == 0; }, "multiples of 3");
  auto got = decode_set(r, 20);
  CHECK(got == std::set<std::uint64_t>{0, 3, 6, 9, 12, 15, 18});
  CHECK(check_coherence(r, 300).coherent);
}

TEST_CASE("integer sequences and shifts") {
  auto r = residue_of_integer(Integer(-7));
  for (std::uint64_t n = 1; n < 100; ++n) CHECK(r.query(n) == mod_floor(Integer(-7), n));
  CHECK(*r.integer_witness() == -7);
  auto s = encode_set({1, 2}).shifted(Integer(5));
  auto base = encode_set({1, 2});
  for (std::uint64_t n = 1; n < 100; ++n) CHECK(s.query(n) == (base.query(n) + 5) % n);
  CHECK(check_coherence(s, 200).coherent);
}

TEST_CASE("coherence violations are located") {
  auto bad = ResidueSequence::custom([](std::uint64_t n) { return n == 4 ? 2 : (n == 1 ? 0 : 1 % n); }, "bad");
  auto v = check_coherence(bad, 10);
  CHECK_FALSE(v.coherent);
  REQUIRE(v.violation.has_value());
  CHECK(v.violation->second == 4);
}

TEST_CASE("decode rejects non-binary residues") {
  auto r = residue_of_integer(Integer(5));
  CHECK_THROWS_AS(decode_set(r, 5), MalformedSequence);
}

TEST_CASE("json round trip") {
  auto r = encode_set({0, 4}).shifted(Integer(-3));
  auto back = residue_from_json(to_json(r));
  for (std::uint64_t n = 1; n < 80; ++n) CHECK(back.query(n) == r.query(n));
  auto z = residue_from_json(to_json(residue_of_integer(Integer(19))));
  CHECK(*z.integer_witness() == 19);
  CHECK_THROWS_AS(to_json(ResidueSequence::custom([](std::uint64_t) { return 0; }, "zero")), ConfigError);
}
