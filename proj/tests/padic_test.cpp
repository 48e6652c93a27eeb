#include "anisoforge/padic.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "anisoforge/error.hpp"

namespace anisoforge::padic {
namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

long ipow(long b, unsigned e) {
  long r = 1;
  while (e--) r *= b;
  return r;
}

// v_p of n modulo p^N by repeated division, N if n = 0 mod p^N
unsigned naive_val(long n, long p, unsigned N) {
  const long m = ipow(p, N);
  n %= m;
  if (n < 0) n += m;
  if (n == 0) return N;
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

TEST(Valuation, Examples) {
  auto c5 = Context::make(5, 6);
  EXPECT_EQ(PadicInt(c5, 50L).valuation(), Valuation::exact(2));
  EXPECT_EQ(PadicInt(c5, 0L).valuation(), Valuation::at_least(6));
  EXPECT_EQ(PadicInt(Context::make(3, 4), 7L).valuation(), Valuation::exact(0));
  EXPECT_EQ(Valuation::at_least(6).to_string(), ">=6");
  EXPECT_EQ(Valuation::exact(2).to_string(), "2");
}

TEST(Context, RejectsBadParameters) {
  EXPECT_EQ(kind_of([] { Context::make(4, 3); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { Context::make(5, 0); }), ErrorKind::InvalidArgument);
}

TEST(PadicInt, ReducesIntoRange) {
  auto c = Context::make(3, 3);
  EXPECT_EQ(PadicInt(c, -1L).value(), 26);
  EXPECT_EQ(PadicInt(c, 30L).value(), 3);
  EXPECT_EQ(PadicInt::prime_power(c, 2).value(), 9);
  EXPECT_EQ(PadicInt::prime_power(c, 3).value(), 0);
}

TEST(PadicInt, RingLawsRandomized) {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {2, 3, 5, 7}) {
    for (unsigned N : {1u, 4u, 9u}) {
      auto c = Context::make(p, N);
      const long m = ipow(static_cast<long>(p), N);
      std::uniform_int_distribution<long> d(0, m - 1);
      for (int t = 0; t < 200; ++t) {
        const long a = d(rng), b = d(rng), e = d(rng);
        const PadicInt x(c, a), y(c, b), z(c, e);
        ASSERT_EQ((x + y).value(), (a + b) % m);
        ASSERT_EQ((x - y).value(), ((a - b) % m + m) % m);
        ASSERT_EQ((x * y).value(), Integer(a) * b % m);
        ASSERT_EQ(x * (y + z), x * y + x * z);
        ASSERT_EQ((x * y) * z, x * (y * z));
        ASSERT_EQ(x + (-x), PadicInt::zero(c));
        ASSERT_EQ(x.valuation().value(), naive_val(a, static_cast<long>(p), N));
        if (x.is_unit()) ASSERT_EQ(x * x.inverse(), PadicInt::one(c));
      }
    }
  }
}

TEST(PadicInt, ValuationMultiplicative) {
  auto c = Context::make(5, 12);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> d(1, 5 * 5 * 5 * 5);
  for (int t = 0; t < 500; ++t) {
    const PadicInt x(c, d(rng)), y(c, d(rng));
    const auto vx = x.valuation(), vy = y.valuation();
    ASSERT_TRUE(vx.is_exact() && vy.is_exact());
    ASSERT_EQ((x * y).valuation(), Valuation::exact(vx.value() + vy.value()));
  }
}

TEST(PadicInt, InverseOfNonUnitFails) {
  auto c = Context::make(5, 4);
  EXPECT_EQ(kind_of([&] { PadicInt(c, 10L).inverse(); }), ErrorKind::PreconditionFailed);
}

TEST(PadicInt, ContextMismatch) {
  auto a = Context::make(5, 4), b = Context::make(5, 5);
  EXPECT_EQ(kind_of([&] { PadicInt(a, 1L) + PadicInt(b, 1L); }), ErrorKind::ContextMismatch);
}

TEST(PadicInt, DivideByPrimePower) {
  auto c = Context::make(3, 5);
  EXPECT_EQ(PadicInt(c, 54L).divide_by_prime_power(3).value(), 2);
  EXPECT_EQ(kind_of([&] { PadicInt(c, 54L).divide_by_prime_power(4); }), ErrorKind::PreconditionFailed);
}

TEST(PadicInt, PrecisionMonotone) {
  auto lo = Context::make(7, 3), hi = Context::make(7, 8);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(0, 5'000'000);
  for (int t = 0; t < 200; ++t) {
    const long a = d(rng), b = d(rng);
    const PadicInt big = PadicInt(hi, a) * PadicInt(hi, b) + PadicInt(hi, a);
    const PadicInt small = PadicInt(lo, a) * PadicInt(lo, b) + PadicInt(lo, a);
    ASSERT_EQ(big.with_precision(3), small);
  }
}

TEST(Hensel, SquareRootOfSevenModEightyOne) {
  auto c = Context::make(3, 4);
  const std::vector<long> f{-7, 0, 1};
  const auto poly = PadicPoly::from_integers(c, f);
  const PadicInt root = hensel_lift(poly, PadicInt(c, 1L));
  EXPECT_EQ((root * root).value(), 7);
  EXPECT_EQ((root - PadicInt(c, 1L)).valuation(), Valuation::exact(1));
  // exhaustive: the root congruent to 1 mod 3
  long found = -1;
  for (long x = 0; x < 81; ++x) {
    if ((x * x - 7) % 81 == 0 && x % 3 == 1) found = x;
  }
  EXPECT_EQ(root.value(), found);
  EXPECT_EQ(found % 9, 4);
}

TEST(Hensel, LinearAndFailure) {
  auto c = Context::make(5, 4);
  const std::vector<long> lin{-17, 1};
  EXPECT_EQ(hensel_lift(PadicPoly::from_integers(c, lin), PadicInt(c, 2L)).value(), 17);
  const std::vector<long> f{-2, 0, 1};
  EXPECT_EQ(kind_of([&] { hensel_lift(PadicPoly::from_integers(c, f), PadicInt(c, 1L)); }),
            ErrorKind::PreconditionFailed);
}

TEST(Hensel, PrecisionExhausted) {
  // f'(a) = 0 mod p^N: no separating derivative at this precision
  auto c = Context::make(2, 3);
  const std::vector<long> f{0, 0, 1};
  EXPECT_EQ(kind_of([&] { hensel_lift(PadicPoly::from_integers(c, f), PadicInt(c, 0L)); }),
            ErrorKind::PrecisionExhausted);
}

TEST(Hensel, RandomAgainstExhaustiveRoots) {
  std::mt19937_64 rng(42);
  int tested = 0;
  while (tested < 300) {
    const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5}[rng() % 3];
    const unsigned N = 1 + rng() % 8;
    const long m = ipow(static_cast<long>(p), N);
    auto c = Context::make(p, N);
    std::vector<long> coeffs(2 + rng() % 3);
    for (auto& x : coeffs) x = static_cast<long>(rng() % m);
    const long a = static_cast<long>(rng() % m);
    const auto f = PadicPoly::from_integers(c, coeffs);
    const PadicInt pa(c, a);
    const auto vf = f(pa).valuation();
    const auto vd = f.derivative()(pa).valuation();
    if (!vd.is_exact() || 2 * vd.value() >= vf.value()) continue;
    const PadicInt root = hensel_lift(f, pa);
    ASSERT_TRUE(f(root).is_zero());
    if (vf.is_exact()) ASSERT_EQ((root - pa).valuation(), Valuation::exact(vf.value() - vd.value()));
    // some exhaustive root agrees with c on the digits Hensel pins down
    bool matched = false;
    for (long x = 0; x < m && !matched; ++x) {
      const PadicInt px(c, x);
      if (!f(px).is_zero()) continue;
      matched = (px - root).valuation().value() >= N - vd.value();
    }
    ASSERT_TRUE(matched);
    ++tested;
  }
}

TEST(Teichmuller, Examples) {
  auto c5 = Context::make(5, 4);
  const PadicInt r = teichmuller_root(PadicInt(c5, 2L));
  EXPECT_EQ(r.residue(), 2u);
  EXPECT_EQ(r.pow(4), PadicInt::one(c5));
  int roots = 0;
  long match = -1;
  for (long x = 0; x < 625; ++x) {
    if (Integer(x) * x * x * x % 625 == 1) {
      ++roots;
      if (x % 5 == 2) match = x;
    }
  }
  EXPECT_EQ(roots, 4);
  EXPECT_EQ(r.value(), match);

  auto c3 = Context::make(3, 3);
  EXPECT_EQ(teichmuller_root(PadicInt(c3, 2L)).value(), 26);
  EXPECT_EQ(teichmuller_root(PadicInt::one(c3)).value(), 1);
}

}  // namespace
}  // namespace anisoforge::padic
