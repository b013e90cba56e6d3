#pragma once

// Profinite residue sequences (elements of Z-hat) and the CRT codec that
// packs a set of naturals into one.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "presb/numeric.hpp"

namespace presb {

/// k-th prime, indexed from zero (nth_prime(0) == 2).
std::uint64_t nth_prime(std::size_t k);

/// Index k with nth_prime(k) == p, or nullopt when p is not prime.
std::optional<std::size_t> prime_index(std::uint64_t p);

/// Prime-power factorisation by trial division, ascending primes.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// Solves x = r_i (mod m_i) for pairwise coprime m_i; returns x in [0, prod m_i).
Integer crt(const std::vector<std::pair<Integer, Integer>>& congruences);

/// A coherent sequence (r_n)_{n >= 1} with r_n in [0, n), queried lazily.
///
/// Values are immutable; answers are memoised behind a mutex so a sequence can
/// be shared between threads. Equality of two sequences is only ever checked
/// up to an explicit bound by the callers.
class ResidueSequence {
 public:
  enum class Kind { EncodedSet, Integer, Custom };

  using Query = std::function<std::uint64_t(std::uint64_t)>;
  using Membership = std::function<bool(std::uint64_t)>;

  /// r_n = z mod n.
  static ResidueSequence of_integer(const presb::Integer& z);

  /// CRT encoding of a finite set of prime indices: r_{p_k^m} = [k in S].
  static ResidueSequence encode_set(std::set<std::uint64_t> members);

  /// Same encoding for a decidable, possibly infinite, set.
  static ResidueSequence encode_set(Membership member, std::string description);

  /// Arbitrary query function. No coherence is assumed; see check_coherence.
  static ResidueSequence custom(Query query, std::string description);

  /// r_n for n >= 1. Throws std::invalid_argument for n == 0.
  std::uint64_t query(std::uint64_t n) const;
  presb::Integer query(const presb::Integer& n) const;

  Kind kind() const;
  const std::string& description() const;

  /// The members, when this is the encoding of a finite set.
  std::optional<std::set<std::uint64_t>> finite_members() const;

  /// An integer with this residue sequence, when one is known structurally.
  std::optional<presb::Integer> integer_witness() const;

  /// Integer offset applied on top of the base sequence (see shifted()).
  const presb::Integer& shift() const;

  /// The sequence of X + t where X has this sequence: r'_n = (r_n + t) mod n.
  ResidueSequence shifted(const presb::Integer& t) const;

 private:
  struct Impl;
  explicit ResidueSequence(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

ResidueSequence residue_of_integer(const Integer& z);
ResidueSequence encode_set(const std::set<std::uint64_t>& members);

/// { k <= k_max : r_{p_k} = 1 }. Throws MalformedSequence if some r_{p_k} is not 0 or 1.
std::set<std::uint64_t> decode_set(const ResidueSequence& r, std::uint64_t k_max);

struct CoherenceVerdict {
  bool coherent = true;
  /// First violating (i, j) with i | j <= bound, scanning j then i ascending.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> violation;
  std::string detail;
};

CoherenceVerdict check_coherence(const ResidueSequence& r, std::uint64_t bound);

/// Lines "n: r_n" for n = 1..bound.
std::string residue_table(const ResidueSequence& r, std::uint64_t bound);

/// {"kind":"set","members":[...]} or {"kind":"int","value":z}; a non-zero
/// shift adds "shift". Custom sequences are not serialisable (ConfigError).
nlohmann::json to_json(const ResidueSequence& r);
ResidueSequence residue_from_json(const nlohmann::json& j);

}  // namespace presb
