#pragma once

// Exact integer machinery: congruences, deterministic primality, prime search in
// arithmetic progressions, and the two prime-sequence constructions together with
// the prime sets S and Sigma they induce.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace anisoforge::arith {

using Integer = mpz_class;

inline constexpr std::uint64_t kDefaultSearchSteps = 10'000'000;

struct Congruence {
  Integer residue;
  Integer modulus;
};

/// Combines a system of congruences into one. The result residue is reduced into
/// [0, modulus) and the modulus is the lcm of the inputs. An empty system yields
/// (0, 1). Throws Error(Inconsistent) when two congruences disagree on a common factor.
Congruence crt_solve(std::span<const Congruence> congruences);

// Primality. Values below 10^12 are settled by trial division; up to the proven
// bound for the first thirteen prime bases the test is deterministic Miller-Rabin.
// Beyond that bound no unconditional answer is available and
// Error(SearchBudgetExceeded) is thrown.
bool is_prime(const Integer& n);
bool is_prime(std::uint64_t n);
bool is_prime_trial_division(std::uint64_t n);
const Integer& deterministic_primality_bound();

/// Smallest prime strictly greater than n.
Integer next_prime(const Integer& n);
std::uint64_t next_prime(std::uint64_t n);

/// Distinct prime divisors of |n|, ascending. Trial division plus Pollard-Brent rho.
std::vector<Integer> prime_factors(const Integer& n);

/// Smallest prime q >= lower with q = a (mod m). Candidates are examined in
/// parallel batches; the minimum hit of the earliest non-empty batch wins, so the
/// answer matches the serial scan.
Integer find_prime_in_progression(const Integer& a, const Integer& m, const Integer& lower,
                                  std::uint64_t max_steps = kDefaultSearchSteps);
Integer find_prime_in_progression_serial(const Integer& a, const Integer& m,
                                         const Integer& lower,
                                         std::uint64_t max_steps = kDefaultSearchSteps);

struct PairSeqEntry {
  unsigned index = 0;  // 1-based
  Integer k;
  Integer p;

  friend bool operator==(const PairSeqEntry&, const PairSeqEntry&) = default;
};

struct TripleSeqEntry {
  unsigned index = 0;
  Integer t;
  Integer theta;
  Integer y;
  Integer p;

  friend bool operator==(const TripleSeqEntry&, const TripleSeqEntry&) = default;
};

/// The modulus prod_{j < n} p_j * (k_j / 2^j) * (p_j - k_j) constraining entry n of a
/// pair sequence; `prefix` holds entries 1..n-1. Throws PreconditionFailed if some
/// k_j is not divisible by 2^j.
Integer pair_modulus(std::span<const PairSeqEntry> prefix);

/// Pair sequence with least-solution tie-breaking: k_n is the least positive
/// solution of its congruences, p_n the least prime meeting its congruences and
/// p_n >= 1 + 2 k_n.
std::vector<PairSeqEntry> gen_pair_sequence(unsigned n_max,
                                            std::uint64_t max_steps = kDefaultSearchSteps);

/// Lexicographically least (t, theta, y) of primes with 2 < t < theta < y, a prime
/// sum p, and t greater than the previous p.
std::vector<TripleSeqEntry> gen_triple_sequence(unsigned n_max,
                                                std::uint64_t max_steps = kDefaultSearchSteps);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool all_passed() const;
  std::vector<Check> failures() const;
};

VerificationReport verify_pair_congruences(std::span<const PairSeqEntry> seq);
VerificationReport verify_triple_sequence(std::span<const TripleSeqEntry> seq);

struct ThreePrimes {
  std::uint64_t p1 = 0;
  std::uint64_t p2 = 0;
  std::uint64_t p3 = 0;

  friend bool operator==(const ThreePrimes&, const ThreePrimes&) = default;
};

/// Lexicographically least p1 < p2 < p3, all prime and larger than every excluded
/// prime, with p1 + p2 + p3 = n. Throws NoDecomposition when none exists.
ThreePrimes three_prime_decompose(std::uint64_t n, std::span<const std::uint64_t> excluded);

enum class SequenceKind { Pair, Triple };

std::string_view to_string(SequenceKind kind);

struct SigmaSPlan {
  std::vector<Integer> S;      // ascending, distinct
  std::vector<Integer> Sigma;  // ascending, distinct
  SequenceKind provenance = SequenceKind::Pair;

  bool in_sigma(const Integer& q) const;
  bool in_s(const Integer& q) const;
};

/// Throws DisjointnessViolated when S and Sigma meet.
SigmaSPlan derive_plan(std::span<const PairSeqEntry> seq);
SigmaSPlan derive_plan(std::span<const TripleSeqEntry> seq);

}  // namespace anisoforge::arith
