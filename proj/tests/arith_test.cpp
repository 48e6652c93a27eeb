#include "anisoforge/arith.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "anisoforge/error.hpp"

namespace anisoforge::arith {
namespace {

bool naive_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

TEST(Crt, CombinesCoprimeModuli) {
  const std::vector<Congruence> sys{{1, 15}, {4, 8}};
  const auto r = crt_solve(sys);
  EXPECT_EQ(r.residue, 76);
  EXPECT_EQ(r.modulus, 120);
  // exhaustive
  int hits = 0;
  for (int x = 0; x < 120; ++x) hits += (x % 15 == 1 && x % 8 == 4);
  EXPECT_EQ(hits, 1);
}

TEST(Crt, TrivialAndEmpty) {
  const std::vector<Congruence> one{{0, 1}};
  EXPECT_EQ(crt_solve(one).residue, 0);
  EXPECT_EQ(crt_solve(one).modulus, 1);
  EXPECT_EQ(crt_solve({}).modulus, 1);
}

TEST(Crt, ConflictThrows) {
  const std::vector<Congruence> sys{{1, 2}, {0, 2}};
  EXPECT_EQ(kind_of([&] { crt_solve(sys); }), ErrorKind::Inconsistent);
}

TEST(Crt, NonCoprimeConsistent) {
  const std::vector<Congruence> sys{{2, 6}, {8, 10}};
  const auto r = crt_solve(sys);
  EXPECT_EQ(r.modulus, 30);
  EXPECT_EQ(r.residue, 8);
}

TEST(Crt, RandomSystemsAgreeWithScan) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> mod(1, 60);
  for (int trial = 0; trial < 300; ++trial) {
    const int m1 = mod(rng), m2 = mod(rng), m3 = mod(rng);
    const long l = std::lcm(std::lcm(m1, m2), m3);
    const int x = std::uniform_int_distribution<int>(0, static_cast<int>(l) - 1)(rng);
    const std::vector<Congruence> sys{{x % m1, m1}, {x % m2, m2}, {x % m3, m3}};
    const auto r = crt_solve(sys);
    ASSERT_EQ(r.modulus, l);
    long first = -1;
    for (long y = 0; y < l && first < 0; ++y) {
      if (y % m1 == x % m1 && y % m2 == x % m2 && y % m3 == x % m3) first = y;
    }
    ASSERT_EQ(r.residue, first);
  }
}

TEST(Primality, MatchesNaiveBelowTenThousand) {
  for (std::uint64_t n = 0; n < 10'000; ++n) {
    ASSERT_EQ(is_prime(n), naive_prime(n)) << n;
    ASSERT_EQ(is_prime_trial_division(n), naive_prime(n)) << n;
  }
}

TEST(Primality, LargeKnownValues) {
  EXPECT_TRUE(is_prime(Integer("2192654485307045657")));
  EXPECT_TRUE(is_prime(Integer("2305843009213693951")));   // 2^61 - 1
  EXPECT_FALSE(is_prime(Integer("3215031751")));           // strong pseudoprime to 2,3,5,7
  EXPECT_FALSE(is_prime(Integer("3825123056546413051")));  // spsp to the first 9 bases
  EXPECT_TRUE(is_prime(std::uint64_t{1'000'000'007}));
}

TEST(Primality, RefusesBeyondProvenBound) {
  const Integer big = deterministic_primality_bound() + 2;
  EXPECT_EQ(kind_of([&] { is_prime(big); }), ErrorKind::SearchBudgetExceeded);
  // even numbers are still decided
  EXPECT_FALSE(is_prime(Integer(deterministic_primality_bound() + 1)));
}

TEST(Factor, SmallAndLarge) {
  EXPECT_EQ(prime_factors(Integer(76 * 1141)),
            (std::vector<Integer>{2, 7, 19, 163}));
  EXPECT_EQ(prime_factors(Integer("2192654482536794641")),
            (std::vector<Integer>{67, 14666191, Integer("2231403253")}));
  EXPECT_EQ(prime_factors(Integer(1)), std::vector<Integer>{});
}

TEST(Progression, Examples) {
  EXPECT_EQ(find_prime_in_progression(77, 1140, 153), 1217);
  EXPECT_EQ(find_prime_in_progression(1, 2, 3), 3);
  EXPECT_EQ(find_prime_in_progression(2, 15, 2), 2);
}

TEST(Progression, ParallelMatchesSerial) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const long m = std::uniform_int_distribution<long>(1, 5000)(rng);
    long a = std::uniform_int_distribution<long>(0, m - 1)(rng);
    while (std::gcd(a, m) != 1) a = (a + 1) % m;
    const long lower = std::uniform_int_distribution<long>(0, 100000)(rng);
    const Integer par = find_prime_in_progression(a, m, lower);
    ASSERT_EQ(par, find_prime_in_progression_serial(a, m, lower));
    // least: nothing smaller in the progression
    for (long q = par.get_si() - m; q >= lower; q -= m) ASSERT_FALSE(naive_prime(q));
  }
}

TEST(Progression, Errors) {
  EXPECT_EQ(kind_of([] { find_prime_in_progression(2, 4, 0); }), ErrorKind::PreconditionFailed);
  EXPECT_EQ(kind_of([] { find_prime_in_progression(1, 2, Integer("1000000000000"), 2); }),
            ErrorKind::SearchBudgetExceeded);
}

// Oracle: brute force over k and p with the congruences spelled out directly.
TEST(PairSequence, SecondEntryByBruteForce) {
  long k2 = 0;
  for (long k = 1; k2 == 0; ++k) {
    if (k % 15 == 1 && k % 8 == 4) k2 = k;
  }
  long p2 = 0;
  for (long p = 2 * k2 + 1; p2 == 0; ++p) {
    if (p % 15 == 2 && p % k2 == 1 && naive_prime(p)) p2 = p;
  }
  EXPECT_EQ(k2, 76);
  EXPECT_EQ(p2, 1217);
  const auto seq = gen_pair_sequence(2);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq[0], (PairSeqEntry{1, 2, 5}));
  EXPECT_EQ(seq[1], (PairSeqEntry{2, k2, p2}));
}

TEST(PairSequence, ThirdEntryFrozen) {
  const auto seq = gen_pair_sequence(3);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq[2].k, Integer("2770251016"));
  EXPECT_EQ(seq[2].p, Integer("2192654485307045657"));
  EXPECT_TRUE(verify_pair_congruences(seq).all_passed());
  // least k: no smaller positive solution of the two congruences
  const Integer m = pair_modulus(std::span(seq).first(2));
  EXPECT_EQ(m, 5 * 1 * 3 * 1217 * 19 * 1141);
  EXPECT_LE(seq[2].k, m * 16);
}

TEST(PairSequence, GcdLaw) {
  const auto seq = gen_pair_sequence(3);
  for (std::size_t n = 0; n < seq.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      const Integer a = seq[m].p * seq[m].k * (seq[m].p - seq[m].k);
      const Integer b = seq[n].p * seq[n].k * (seq[n].p - seq[n].k);
      EXPECT_EQ(gcd(a, b), Integer(1) << (m + 1)) << m + 1 << "," << n + 1;
    }
  }
}

TEST(PairSequence, VerifierRejectsBadEntries) {
  const std::vector<PairSeqEntry> bad{{1, 3, 7}};
  const auto report = verify_pair_congruences(bad);
  EXPECT_FALSE(report.all_passed());
  EXPECT_FALSE(report.failures().empty());

  const std::vector<PairSeqEntry> good{{1, 2, 5}};
  EXPECT_TRUE(verify_pair_congruences(good).all_passed());

  std::vector<PairSeqEntry> tampered = gen_pair_sequence(2);
  tampered[1].p = 1229;  // prime, but p != 2 mod 15
  EXPECT_FALSE(verify_pair_congruences(tampered).all_passed());
}

TEST(PairSequence, Deterministic) { EXPECT_EQ(gen_pair_sequence(3), gen_pair_sequence(3)); }

// Oracle: lexicographic scan over odd primes written independently here.
std::vector<std::array<long, 4>> triple_oracle(int count) {
  std::vector<long> primes;
  for (long q = 3; q < 400; ++q) {
    if (naive_prime(q)) primes.push_back(q);
  }
  std::vector<std::array<long, 4>> out;
  long prev = 2;
  while (static_cast<int>(out.size()) < count) {
    bool found = false;
    for (std::size_t i = 0; i < primes.size() && !found; ++i) {
      if (primes[i] <= prev) continue;
      for (std::size_t j = i + 1; j < primes.size() && !found; ++j) {
        for (std::size_t l = j + 1; l < primes.size() && !found; ++l) {
          const long s = primes[i] + primes[j] + primes[l];
          if (naive_prime(s)) {
            out.push_back({primes[i], primes[j], primes[l], s});
            prev = s;
            found = true;
          }
        }
      }
    }
  }
  return out;
}

TEST(TripleSequence, MatchesLexicographicScan) {
  const auto oracle = triple_oracle(3);
  const auto seq = gen_triple_sequence(3);
  ASSERT_EQ(seq.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(seq[i].t, oracle[i][0]);
    EXPECT_EQ(seq[i].theta, oracle[i][1]);
    EXPECT_EQ(seq[i].y, oracle[i][2]);
    EXPECT_EQ(seq[i].p, oracle[i][3]);
  }
  EXPECT_EQ(seq[0], (TripleSeqEntry{1, 3, 5, 11, 19}));
  EXPECT_EQ(seq[1], (TripleSeqEntry{2, 23, 29, 31, 83}));
  EXPECT_TRUE(verify_triple_sequence(seq).all_passed());
  for (const auto& e : seq) EXPECT_LT(3 * e.t, e.p);
}

TEST(TripleSequence, VerifierRejects) {
  std::vector<TripleSeqEntry> seq = gen_triple_sequence(2);
  seq[1].p = 89;
  EXPECT_FALSE(verify_triple_sequence(seq).all_passed());
  const std::vector<TripleSeqEntry> overlap{{1, 3, 5, 11, 19}, {2, 19, 23, 29, 71}};
  EXPECT_FALSE(verify_triple_sequence(overlap).all_passed());
}

TEST(ThreePrimes, Examples) {
  EXPECT_EQ(three_prime_decompose(19, {}), (ThreePrimes{3, 5, 11}));
  EXPECT_EQ(kind_of([] { three_prime_decompose(9, {}); }), ErrorKind::NoDecomposition);
  const std::vector<std::uint64_t> ex{2, 3};
  EXPECT_EQ(three_prime_decompose(23, ex), (ThreePrimes{5, 7, 11}));
  EXPECT_EQ(kind_of([] { three_prime_decompose(20, {}); }), ErrorKind::InvalidArgument);
}

TEST(ThreePrimes, PropertyOverRange) {
  const std::vector<std::uint64_t> ex{2, 3, 5};
  for (std::uint64_t n = 31; n <= 301; n += 2) {
    try {
      const auto t = three_prime_decompose(n, ex);
      EXPECT_EQ(t.p1 + t.p2 + t.p3, n);
      EXPECT_TRUE(t.p1 < t.p2 && t.p2 < t.p3);
      EXPECT_GT(t.p1, 5u);
      EXPECT_TRUE(naive_prime(t.p1) && naive_prime(t.p2) && naive_prime(t.p3));
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::NoDecomposition);
      // only 33 and 45 in this range
      EXPECT_TRUE(n == 33 || n == 45) << n;
    }
  }
}

TEST(Plan, PairAndTriple) {
  const auto p1 = derive_plan(gen_pair_sequence(1));
  EXPECT_EQ(p1.S, (std::vector<Integer>{2, 3}));
  EXPECT_EQ(p1.Sigma, (std::vector<Integer>{5}));
  const auto p2 = derive_plan(gen_pair_sequence(2));
  EXPECT_EQ(p2.S, (std::vector<Integer>{2, 3, 7, 19, 163}));
  EXPECT_EQ(p2.Sigma, (std::vector<Integer>{5, 1217}));
  const auto t1 = derive_plan(gen_triple_sequence(1));
  EXPECT_EQ(t1.S, (std::vector<Integer>{3, 5, 11}));
  EXPECT_EQ(t1.Sigma, (std::vector<Integer>{19}));
  EXPECT_EQ(t1.provenance, SequenceKind::Triple);
  EXPECT_TRUE(t1.in_sigma(19));
  EXPECT_FALSE(t1.in_s(19));
}

TEST(Plan, DisjointnessViolated) {
  // 5 divides k and is also a target prime
  const std::vector<PairSeqEntry> bad{{1, 2, 5}, {2, 10, 11}};
  EXPECT_EQ(kind_of([&] { derive_plan(bad); }), ErrorKind::DisjointnessViolated);
}

}  // namespace
}  // namespace anisoforge::arith
