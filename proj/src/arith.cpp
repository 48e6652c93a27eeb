#include "anisoforge/arith.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <sstream>

#include <omp.h>

#include "anisoforge/error.hpp"

namespace anisoforge::arith {
namespace {

constexpr std::uint64_t kTrialDivisionLimit = 1'000'000'000'000ULL;

std::string str(const Integer& v) { return v.get_str(); }

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool fits_u64(const Integer& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const Integer& n) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

Integer from_u64(std::uint64_t v) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

bool miller_rabin_round(const Integer& n, const Integer& d, unsigned s, unsigned long base) {
  Integer a = base;
  if (a % n == 0) return true;
  Integer x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Integer n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

bool miller_rabin_deterministic(const Integer& n) {
  static constexpr std::array<unsigned long, 13> kBases{2, 3, 5, 7, 11, 13, 17,
                                                        19, 23, 29, 31, 37, 41};
  Integer d = n - 1;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  for (auto base : kBases) {
    if (!miller_rabin_round(n, d, s, base)) return false;
  }
  return true;
}

Integer pollard_brent(const Integer& n, unsigned long c) {
  Integer y = 2, x, ys, q = 1, g = 1;
  const std::uint64_t m = 128;
  std::uint64_t r = 1;
  auto step = [&](const Integer& v) -> Integer { return (v * v + c) % n; };
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = step(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
        y = step(y);
        q = q * abs(x - y) % n;
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = step(ys);
      g = gcd(abs(x - ys), n);
    } while (g == 1);
  }
  return g;
}

void factor_into(const Integer& n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    Integer d = pollard_brent(n, c);
    if (d != n) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

Integer first_in_progression(const Integer& a, const Integer& m, const Integer& lower) {
  return lower + mod_floor(a - lower, m);
}

void check_progression_args(const Integer& a, const Integer& m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "progression modulus must be >= 1");
  if (gcd(a, m) != 1) {
    throw Error(ErrorKind::PreconditionFailed,
                "gcd(" + str(a) + ", " + str(m) + ") != 1: progression holds no primes");
  }
}

}  // namespace

Congruence crt_solve(std::span<const Congruence> congruences) {
  Integer residue = 0;
  Integer modulus = 1;
  for (const auto& c : congruences) {
    if (c.modulus < 1) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
    const Integer r2 = mod_floor(c.residue, c.modulus);
    const Integer g = gcd(modulus, c.modulus);
    const Integer diff = r2 - residue;
    if (mod_floor(diff, g) != 0) {
      throw Error(ErrorKind::Inconsistent, "x = " + str(residue) + " mod " + str(modulus) +
                                               " conflicts with x = " + str(r2) + " mod " +
                                               str(c.modulus));
    }
    const Integer m1 = modulus / g;
    const Integer m2 = c.modulus / g;
    Integer inv = 0;
    if (m2 > 1) {
      mpz_invert(inv.get_mpz_t(), Integer(m1 % m2).get_mpz_t(), m2.get_mpz_t());
    }
    const Integer t = mod_floor(Integer(diff / g) * inv, m2);
    residue = residue + modulus * t;
    modulus = modulus * m2;
    residue = mod_floor(residue, modulus);
  }
  return {residue, modulus};
}

const Integer& deterministic_primality_bound() {
  static const Integer bound("3317044064679887385961981");
  return bound;
}

bool is_prime_trial_division(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

bool is_prime(std::uint64_t n) {
  if (n < kTrialDivisionLimit) return is_prime_trial_division(n);
  return is_prime(from_u64(n));
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  if (fits_u64(n) && to_u64(n) < kTrialDivisionLimit) return is_prime_trial_division(to_u64(n));
  if (mpz_even_p(n.get_mpz_t())) return false;
  if (n < deterministic_primality_bound()) return miller_rabin_deterministic(n);
  throw Error(ErrorKind::SearchBudgetExceeded,
              "no unconditional primality test available for " + str(n));
}

Integer next_prime(const Integer& n) {
  Integer q = n < 2 ? Integer(2) : Integer(n + 1);
  while (!is_prime(q)) ++q;
  return q;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t q = n < 2 ? 2 : n + 1;
  while (!is_prime(q)) ++q;
  return q;
}

std::vector<Integer> prime_factors(const Integer& n_in) {
  Integer n = abs(n_in);
  std::vector<Integer> out;
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "prime_factors(0)");
  for (unsigned long d = 2; d < 10'000 && Integer(d) * d <= n; d += (d == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      out.emplace_back(d);
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) n /= d;
    }
  }
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Integer find_prime_in_progression_serial(const Integer& a, const Integer& m,
                                         const Integer& lower, std::uint64_t max_steps) {
  check_progression_args(a, m);
  Integer q = first_in_progression(a, m, lower);
  for (std::uint64_t step = 0; step < max_steps; ++step, q += m) {
    if (is_prime(q)) return q;
  }
  throw Error(ErrorKind::SearchBudgetExceeded,
              "no prime = " + str(a) + " mod " + str(m) + " within " +
                  std::to_string(max_steps) + " steps from " + str(lower));
}

Integer find_prime_in_progression(const Integer& a, const Integer& m, const Integer& lower,
                                  std::uint64_t max_steps) {
  check_progression_args(a, m);
  constexpr std::int64_t kBatch = 256;
  const Integer start = first_in_progression(a, m, lower);
  for (std::uint64_t done = 0; done < max_steps; done += kBatch) {
    const auto batch =
        static_cast<std::int64_t>(std::min<std::uint64_t>(kBatch, max_steps - done));
    std::int64_t hit = std::numeric_limits<std::int64_t>::max();
    bool overflowed = false;
#pragma omp parallel for schedule(static) reduction(min : hit) reduction(|| : overflowed)
    for (std::int64_t i = 0; i < batch; ++i) {
      const Integer q = start + m * Integer(static_cast<unsigned long>(done + i));
      try {
        if (is_prime(q)) hit = std::min(hit, i);
      } catch (const Error&) {
        overflowed = true;
      }
    }
    if (hit != std::numeric_limits<std::int64_t>::max()) {
      return start + m * Integer(static_cast<unsigned long>(done + hit));
    }
    if (overflowed) {
      throw Error(ErrorKind::SearchBudgetExceeded,
                  "progression left the range of unconditional primality testing");
    }
  }
  throw Error(ErrorKind::SearchBudgetExceeded,
              "no prime = " + str(a) + " mod " + str(m) + " within " +
                  std::to_string(max_steps) + " steps from " + str(lower));
}

Integer pair_modulus(std::span<const PairSeqEntry> prefix) {
  Integer modulus = 1;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const auto j = static_cast<unsigned long>(i + 1);
    const auto& e = prefix[i];
    Integer two_j;
    mpz_ui_pow_ui(two_j.get_mpz_t(), 2, j);
    if (!mpz_divisible_p(e.k.get_mpz_t(), two_j.get_mpz_t())) {
      throw Error(ErrorKind::PreconditionFailed,
                  "k_" + std::to_string(j) + " = " + str(e.k) + " is not divisible by 2^" +
                      std::to_string(j));
    }
    modulus *= e.p * (e.k / two_j) * (e.p - e.k);
  }
  return modulus;
}

std::vector<PairSeqEntry> gen_pair_sequence(unsigned n_max, std::uint64_t max_steps) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  std::vector<PairSeqEntry> seq;
  seq.reserve(n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    const Integer modulus = pair_modulus(seq);
    Integer two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
    const std::array<Congruence, 2> k_system{Congruence{two_n, two_n * 2},
                                             Congruence{1, modulus}};
    auto [k, k_mod] = crt_solve(k_system);
    if (k == 0) k = k_mod;

    const std::array<Congruence, 2> p_system{Congruence{2, modulus}, Congruence{1, k}};
    const auto [p_res, p_mod] = crt_solve(p_system);
    Integer lower = 1 + 2 * k;
    if (!seq.empty() && seq.back().p + 1 > lower) lower = seq.back().p + 1;
    Integer p = find_prime_in_progression(p_res, p_mod, lower, max_steps);
    seq.push_back({n, std::move(k), std::move(p)});
  }
  return seq;
}

std::vector<TripleSeqEntry> gen_triple_sequence(unsigned n_max, std::uint64_t max_steps) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  std::vector<TripleSeqEntry> seq;
  Integer previous = 2;
  for (unsigned n = 1; n <= n_max; ++n) {
    const Integer t = next_prime(previous);
    const Integer theta = next_prime(t);
    Integer y = next_prime(theta);
    std::uint64_t steps = 0;
    while (!is_prime(Integer(t + theta + y))) {
      if (++steps >= max_steps) {
        throw Error(ErrorKind::SearchBudgetExceeded,
                    "no prime-sum triple starting (" + str(t) + ", " + str(theta) + ")");
      }
      y = next_prime(y);
    }
    Integer p = t + theta + y;
    previous = p;
    seq.push_back({n, t, theta, std::move(y), std::move(p)});
  }
  return seq;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<Check> VerificationReport::failures() const {
  std::vector<Check> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const Check& c) { return !c.passed; });
  return out;
}

namespace {

void add(VerificationReport& r, std::string name, bool ok, std::string detail = {}) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

// Primality inside a report: an undecidable value is a failed check, not an exception.
bool prime_for_report(const Integer& n, std::string& detail) {
  try {
    return is_prime(n);
  } catch (const Error& e) {
    detail = e.what();
    return false;
  }
}

}  // namespace

VerificationReport verify_pair_congruences(std::span<const PairSeqEntry> seq) {
  VerificationReport report;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& e = seq[i];
    const unsigned n = static_cast<unsigned>(i + 1);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    add(report, tag + "index", e.index == n, "index field " + std::to_string(e.index));

    std::string detail;
    const bool prime = prime_for_report(e.p, detail);
    add(report, tag + "p_n prime", prime, detail.empty() ? str(e.p) : detail);
    add(report, tag + "k_n >= 2", e.k >= 2, str(e.k));
    add(report, tag + "p_n >= 1 + 2k_n", e.p >= 1 + 2 * e.k);
    add(report, tag + "p_n = 1 mod k_n", e.k >= 1 && mod_floor(e.p, e.k) == 1 % e.k);

    Integer two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
    add(report, tag + "k_n = 2^n mod 2^(n+1)", mod_floor(e.k, two_n * 2) == two_n);

    if (n == 1) {
      add(report, tag + "k_1 = 2, p_1 = 5", e.k == 2 && e.p == 5);
    } else {
      Integer modulus;
      bool integral = true;
      try {
        modulus = pair_modulus(seq.first(i));
      } catch (const Error& err) {
        integral = false;
        detail = err.what();
      }
      add(report, tag + "modulus integral", integral,
          integral ? "M = " + str(modulus) : detail);
      if (integral) {
        add(report, tag + "k_n = 1 mod M", mod_floor(e.k, modulus) == 1 % modulus);
        add(report, tag + "p_n = 2 mod M", mod_floor(e.p, modulus) == 2 % modulus);
      }
      add(report, tag + "p_n > p_{n-1}", e.p > seq[i - 1].p);
    }
  }

  std::vector<Integer> invariant;
  invariant.reserve(seq.size());
  for (const auto& e : seq) invariant.push_back(e.p * e.k * (e.p - e.k));
  for (std::size_t m = 0; m < seq.size(); ++m) {
    for (std::size_t n = m + 1; n < seq.size(); ++n) {
      const Integer g = gcd(invariant[m], invariant[n]);
      Integer expected;
      mpz_ui_pow_ui(expected.get_mpz_t(), 2, static_cast<unsigned long>(m + 1));
      add(report,
          "gcd law (m=" + std::to_string(m + 1) + ", n=" + std::to_string(n + 1) + ") = 2^" +
              std::to_string(m + 1),
          g == expected, "gcd = " + str(g));
    }
  }
  return report;
}

VerificationReport verify_triple_sequence(std::span<const TripleSeqEntry> seq) {
  VerificationReport report;
  std::vector<Integer> products;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& e = seq[i];
    const unsigned n = static_cast<unsigned>(i + 1);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    add(report, tag + "index", e.index == n);
    std::string detail;
    const bool all_prime = prime_for_report(e.t, detail) && prime_for_report(e.theta, detail) &&
                           prime_for_report(e.y, detail) && prime_for_report(e.p, detail);
    add(report, tag + "t, theta, y, p prime", all_prime, detail);
    add(report, tag + "t + theta + y = p", e.t + e.theta + e.y == e.p);
    add(report, tag + "2 < t < theta < y", 2 < e.t && e.t < e.theta && e.theta < e.y);
    add(report, tag + "t < p/3", 3 * e.t < e.p);
    if (i + 1 < seq.size()) add(report, tag + "p_n < t_{n+1}", e.p < seq[i + 1].t);
    products.push_back(e.p * e.t * e.theta * e.y);
  }
  for (std::size_t m = 0; m < products.size(); ++m) {
    add(report, "product " + std::to_string(m + 1) + " odd", mpz_odd_p(products[m].get_mpz_t()));
    for (std::size_t n = m + 1; n < products.size(); ++n) {
      const Integer g = gcd(products[m], products[n]);
      add(report, "products coprime (m=" + std::to_string(m + 1) + ", n=" + std::to_string(n + 1) + ")",
          g == 1, "gcd = " + str(g));
    }
  }
  return report;
}

ThreePrimes three_prime_decompose(std::uint64_t n, std::span<const std::uint64_t> excluded) {
  if (n % 2 == 0 || n < 9) {
    throw Error(ErrorKind::InvalidArgument, "expected an odd integer >= 9, got " + std::to_string(n));
  }
  std::uint64_t floor = 1;
  for (auto q : excluded) floor = std::max(floor, q);
  for (std::uint64_t p1 = next_prime(floor); 3 * p1 < n; p1 = next_prime(p1)) {
    for (std::uint64_t p2 = next_prime(p1); p1 + 2 * p2 < n; p2 = next_prime(p2)) {
      const std::uint64_t p3 = n - p1 - p2;
      if (is_prime(p3)) return {p1, p2, p3};
    }
  }
  throw Error(ErrorKind::NoDecomposition,
              std::to_string(n) + " is not a sum of three distinct primes > " + std::to_string(floor));
}

std::string_view to_string(SequenceKind kind) {
  return kind == SequenceKind::Pair ? "pair" : "triple";
}

bool SigmaSPlan::in_sigma(const Integer& q) const {
  return std::binary_search(Sigma.begin(), Sigma.end(), q);
}

bool SigmaSPlan::in_s(const Integer& q) const { return std::binary_search(S.begin(), S.end(), q); }

namespace {

void normalize(std::vector<Integer>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

SigmaSPlan finish_plan(std::vector<Integer> s, std::vector<Integer> sigma, SequenceKind kind) {
  normalize(s);
  normalize(sigma);
  std::vector<Integer> both;
  std::set_intersection(s.begin(), s.end(), sigma.begin(), sigma.end(), std::back_inserter(both));
  if (!both.empty()) {
    throw Error(ErrorKind::DisjointnessViolated, str(both.front()) + " lies in both S and Sigma");
  }
  return {std::move(s), std::move(sigma), kind};
}

}  // namespace

SigmaSPlan derive_plan(std::span<const PairSeqEntry> seq) {
  std::vector<Integer> s, sigma;
  for (const auto& e : seq) {
    sigma.push_back(e.p);
    for (auto& q : prime_factors(e.k)) s.push_back(std::move(q));
    for (auto& q : prime_factors(Integer(e.p - e.k))) s.push_back(std::move(q));
  }
  return finish_plan(std::move(s), std::move(sigma), SequenceKind::Pair);
}

SigmaSPlan derive_plan(std::span<const TripleSeqEntry> seq) {
  std::vector<Integer> s, sigma;
  for (const auto& e : seq) {
    s.push_back(e.t);
    s.push_back(e.theta);
    s.push_back(e.y);
    sigma.push_back(e.p);
  }
  return finish_plan(std::move(s), std::move(sigma), SequenceKind::Triple);
}

}  // namespace anisoforge::arith
