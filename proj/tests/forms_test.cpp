#include "anisoforge/forms.hpp"

#include <gtest/gtest.h>

#include <random>

#include "anisoforge/error.hpp"

namespace anisoforge::forms {
namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

Polynomial poly_of(ContextPtr ctx, unsigned nvars,
                   std::initializer_list<std::pair<Exponents, long>> terms) {
  Polynomial p(std::move(ctx), nvars);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  p.normalize();
  return p;
}

std::vector<PadicInt> vec(const ContextPtr& ctx, std::initializer_list<long> xs) {
  std::vector<PadicInt> out;
  for (long x : xs) out.emplace_back(ctx, x);
  return out;
}

TEST(Polynomial, NormalizeMergesAndDropsZeros) {
  auto c = padic::Context::make(5, 2);
  const auto p = poly_of(c, 2, {{{1, 0}, 3}, {{1, 0}, 22}, {{0, 1}, 1}});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.terms()[0].first, (Exponents{0, 1}));
  const auto q = Polynomial::variable(c, 2, 0) * Polynomial::variable(c, 2, 1);
  EXPECT_EQ(q.terms().size(), 1u);
  EXPECT_EQ(q.terms()[0].first, (Exponents{1, 1}));
}

TEST(HomogeneousForm, RejectsMixedDegrees) {
  auto c = padic::Context::make(3, 2);
  EXPECT_EQ(kind_of([&] { HomogeneousForm(poly_of(c, 2, {{{2, 0}, 1}, {{0, 1}, 1}}), 2); }),
            ErrorKind::InvalidArgument);
}

TEST(HomogeneousForm, EvaluateAndShape) {
  auto c = padic::Context::make(5, 4);
  const HomogeneousForm f(poly_of(c, 2, {{{2, 0}, 1}, {{0, 2}, -2}}), 2);
  EXPECT_EQ(f.evaluate(vec(c, {1, 1})).value(), 624);
  EXPECT_TRUE(f.evaluate(vec(c, {0, 0})).is_zero());
  EXPECT_EQ(kind_of([&] { f.evaluate(vec(c, {1})); }), ErrorKind::ShapeMismatch);
  EXPECT_EQ(f.essential_variable_count(), 2u);
}

TEST(HomogeneousForm, Homogeneity) {
  auto c = padic::Context::make(7, 6);
  std::mt19937_64 rng(4);
  const HomogeneousForm f(
      poly_of(c, 3, {{{3, 0, 0}, 2}, {{1, 1, 1}, -5}, {{0, 2, 1}, 11}, {{0, 0, 3}, 1}}), 3);
  for (int t = 0; t < 100; ++t) {
    const long s = static_cast<long>(rng() % 100000);
    const auto x = vec(c, {static_cast<long>(rng() % 100000), static_cast<long>(rng() % 100000),
                           static_cast<long>(rng() % 100000)});
    std::vector<PadicInt> sx;
    for (const auto& xi : x) sx.push_back(xi * PadicInt(c, s));
    ASSERT_EQ(f.evaluate(sx), PadicInt(c, s).pow(3) * f.evaluate(x));
  }
}

TEST(NormForm, QuadraticOverTwo) {
  auto c = padic::Context::make(2, 5);
  auto ring = tower::UnramifiedRing::make(c, 2);  // x^2 + x + 1
  const auto f = norm_form(tower::UExtElem::generator(ring), 2);
  // X1^2 - X1 X2 + X2^2
  EXPECT_EQ(f.polynomial(), poly_of(c, 2, {{{2, 0}, 1}, {{1, 1}, -1}, {{0, 2}, 1}}));
  EXPECT_EQ(f.residue_form().polynomial(),
            poly_of(padic::Context::make(2, 1), 2, {{{2, 0}, 1}, {{1, 1}, 1}, {{0, 2}, 1}}).reduced(1));
}

TEST(NormForm, QuadraticOverFive) {
  auto c = padic::Context::make(5, 4);
  auto ring = tower::UnramifiedRing::with_modulus(c, {-2, 0, 1});
  const auto f = norm_form(tower::UExtElem::generator(ring), 2);
  EXPECT_EQ(f.polynomial(), poly_of(c, 2, {{{2, 0}, 1}, {{0, 2}, -2}}));
  EXPECT_EQ(f.evaluate(vec(c, {1, 1})).value(), 624);  // -1
}

TEST(NormForm, TrivialExtension) {
  auto c = padic::Context::make(3, 3);
  auto ring = tower::UnramifiedRing::make(c, 1);
  const auto f = norm_form(tower::choose_primitive_generator(ring), 1);
  EXPECT_EQ(f.polynomial(), Polynomial::variable(c, 1, 0));
}

TEST(NormForm, Preconditions) {
  auto c = padic::Context::make(5, 3);
  auto ring = tower::UnramifiedRing::make(c, 3);
  EXPECT_EQ(kind_of([&] { norm_form(tower::UExtElem::one(ring), 2); }), ErrorKind::NotPrimitive);
  EXPECT_EQ(kind_of([&] { norm_form(tower::UExtElem::generator(ring), 4); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(monomial_count(2, 3), 6u);
  EXPECT_EQ(monomial_count(19, 3), 210u);
}

TEST(NormForm, ExpansionMatchesNumericNorm) {
  std::mt19937_64 rng(6);
  for (auto [p, f, k] : {std::tuple{5ull, 3u, 2u}, {3ull, 4u, 3u}, {2ull, 5u, 2u}, {7ull, 2u, 2u}}) {
    auto c = padic::Context::make(p, 8);
    auto ring = tower::UnramifiedRing::make(c, f);
    const auto xi = tower::choose_primitive_generator(ring);
    const auto form = norm_form(xi, k);
    for (int t = 0; t < 30; ++t) {
      std::vector<PadicInt> x;
      for (unsigned i = 0; i < k; ++i) x.emplace_back(c, static_cast<long>(rng() % 1'000'000));
      ASSERT_EQ(form.evaluate(x), norm_of_combination(xi, x));
    }
  }
}

TEST(NormMinusScaledPower, Examples) {
  auto c = padic::Context::make(5, 3);
  const auto f1 = norm_minus_scaled_power(tower::UnramifiedRing::make(c, 1), PadicInt(c, 3L));
  EXPECT_EQ(f1.polynomial(), poly_of(c, 2, {{{1, 0}, 1}, {{0, 1}, -3}}));

  auto c2 = padic::Context::make(2, 3);
  const auto f2 = norm_minus_scaled_power(tower::UnramifiedRing::make(c2, 2), PadicInt(c2, 1L));
  EXPECT_EQ(f2.num_vars(), 3u);
  EXPECT_EQ(f2.degree(), 2u);
  EXPECT_EQ(f2.residue_form().polynomial(),
            poly_of(c2, 3, {{{2, 0, 0}, 1}, {{1, 1, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, 1}}).reduced(1));
}

TEST(Spec, PairOne) {
  const auto spec = make_pair_spec(1);
  EXPECT_EQ(spec.target_degree, 5u);
  EXPECT_EQ(spec.block_width, 2u);
  EXPECT_EQ(spec.num_vars(), 10u);
  EXPECT_EQ(spec.factor_degrees(), (std::vector<unsigned>{2, 3}));
  EXPECT_EQ(spec.context()->precision(), default_precision(5));
  EXPECT_EQ(default_precision(5), 33u);
  EXPECT_EQ(spec.pi.valuation(), padic::Valuation::exact(1));
  EXPECT_LE(2u, spec.block_width);
  EXPECT_LE(spec.block_width, (spec.target_degree - 1) / 2);
}

TEST(Spec, TripleOne) {
  const auto spec = make_triple_spec(1);
  EXPECT_EQ(spec.target_degree, 19u);
  EXPECT_EQ(spec.num_vars(), 57u);
  EXPECT_EQ(spec.factor_degrees(), (std::vector<unsigned>{3, 5, 11}));
  EXPECT_LT(3 * spec.block_width, spec.target_degree);
}

TEST(Spec, Failures) {
  BuildOptions ram5;
  ram5.ramification_index = 5;
  EXPECT_EQ(kind_of([&] { make_pair_spec(1, ram5); }), ErrorKind::PlanViolation);
  EXPECT_EQ(kind_of([&] { make_pair_spec(2); }), ErrorKind::BudgetExceeded);
  BuildOptions ram7;
  ram7.ramification_index = 7;
  EXPECT_NO_THROW(make_pair_spec(1, ram7));
}

TEST(Spec, AtPrecisionRoundTrip) {
  const auto spec = make_pair_spec(1);
  const auto lo = at_precision(spec, 4);
  EXPECT_EQ(lo.context()->precision(), 4u);
  EXPECT_NO_THROW(validate_spec(lo));
  const auto back = at_precision(lo, 33);
  for (std::size_t i = 0; i < spec.factors.size(); ++i) {
    EXPECT_TRUE(back.factors[i].ring->same_as(*spec.factors[i].ring));
    EXPECT_EQ(back.factors[i].generator, spec.factors[i].generator);
  }
}

TEST(G, DegreesAndVariables) {
  const auto g = build_g(make_pair_spec(1));
  EXPECT_EQ(g.degree(), 5u);
  EXPECT_EQ(g.num_vars(), 2u);
  const auto gt = build_g(make_triple_spec(1));
  EXPECT_EQ(gt.degree(), 19u);
  EXPECT_EQ(gt.num_vars(), 3u);
  EXPECT_TRUE(g.evaluate(vec(g.context(), {0, 0})).is_zero());
}

// residue of g vanishes exactly on vectors that are 0 mod p
TEST(G, ResidueVanishesOnlyAtZero) {
  const auto spec = make_pair_spec(1, {.p = 5, .precision = 6});
  const auto g = build_g(spec);
  const auto& c = g.context();
  for (long a = 0; a < 25; ++a) {
    for (long b = 0; b < 25; ++b) {
      const bool zero_mod_p = a % 5 == 0 && b % 5 == 0;
      const auto v = g.evaluate(vec(c, {a, b}));
      ASSERT_EQ(v.residue() == 0, zero_mod_p) << a << "," << b;
    }
  }
}

TEST(G, ValuationLaw) {
  const auto spec = make_pair_spec(1);
  const BlockForm f(spec);
  const auto& c = spec.context();
  std::mt19937_64 rng(10);
  for (int t = 0; t < 300; ++t) {
    const unsigned m1 = rng() % 4, m2 = rng() % 4;
    const long u1 = 1 + static_cast<long>(rng() % 4) + 5 * static_cast<long>(rng() % 1000);
    const long u2 = 1 + static_cast<long>(rng() % 4) + 5 * static_cast<long>(rng() % 1000);
    const std::vector<PadicInt> x{PadicInt(c, u1) * PadicInt::prime_power(c, m1),
                                  PadicInt(c, u2) * PadicInt::prime_power(c, m2)};
    ASSERT_EQ(f.evaluate_g(x).valuation(), padic::Valuation::exact(5 * std::min(m1, m2)));
  }
}

TEST(F, ShapeAndEssentialVariables) {
  const auto f = build_f(make_pair_spec(1));
  EXPECT_EQ(f.degree(), 5u);
  EXPECT_EQ(f.num_vars(), 10u);
  EXPECT_TRUE(f.depends_on_all_variables());
  const auto expanded = f.expand();
  EXPECT_EQ(expanded.essential_variable_count(), 10u);
  EXPECT_EQ(expanded.degree(), 5u);
  std::vector<PadicInt> zero(10, PadicInt::zero(f.spec().context()));
  EXPECT_TRUE(f.evaluate(zero).is_zero());
}

TEST(F, ExpandedAgreesWithFactored) {
  const auto f = build_f(make_pair_spec(1));
  const auto expanded = f.expand();
  const auto& c = f.spec().context();
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    std::vector<PadicInt> x;
    for (int i = 0; i < 10; ++i) x.emplace_back(c, static_cast<long>(rng() % 100000));
    ASSERT_EQ(expanded.evaluate(x), f.evaluate(x));
  }
}

TEST(F, TripleEssentialAndExpansionRefused) {
  const auto f = build_f(make_triple_spec(1));
  EXPECT_EQ(f.num_vars(), 57u);
  EXPECT_TRUE(f.depends_on_all_variables());
  EXPECT_EQ(kind_of([&] { f.expand(100); }), ErrorKind::BudgetExceeded);
}

TEST(F, BlockValuationLaw) {
  const auto f = build_f(make_pair_spec(1));
  const auto& c = f.spec().context();
  // all units -> block 1 dominates
  std::vector<PadicInt> units(10, PadicInt::one(c));
  EXPECT_EQ(f.evaluate(units).valuation(), padic::Valuation::exact(1));
  // block 1 divisible by p, the rest units -> min(5 + 1, 2) = 2
  auto shifted = units;
  shifted[0] = PadicInt(c, 5L);
  shifted[1] = PadicInt(c, 10L);
  EXPECT_EQ(f.evaluate(shifted).valuation(), padic::Valuation::exact(2));
}

TEST(F, PiValuationEnforced) {
  auto spec = make_pair_spec(1);
  spec.pi = PadicInt::prime_power(spec.context(), 2);
  EXPECT_EQ(kind_of([&] { BlockForm{spec}; }), ErrorKind::PlanViolation);
}

}  // namespace
}  // namespace anisoforge::forms
