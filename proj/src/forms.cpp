#include "anisoforge/forms.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "anisoforge/determinant.hpp"
#include "anisoforge/error.hpp"

namespace anisoforge::forms {
namespace {

Integer reduce(const Integer& v, const Integer& modulus) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

unsigned total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0U);
}

struct PolynomialOps {
  ContextPtr ctx;
  unsigned num_vars;
  Polynomial zero() const { return Polynomial(ctx, num_vars); }
  Polynomial one() const { return Polynomial::constant(ctx, num_vars, 1); }
  Polynomial add(const Polynomial& a, const Polynomial& b) const { return a + b; }
  Polynomial sub(const Polynomial& a, const Polynomial& b) const { return a - b; }
  Polynomial mul(const Polynomial& a, const Polynomial& b) const { return a * b; }
};

struct PadicOps {
  ContextPtr ctx;
  PadicInt zero() const { return PadicInt::zero(ctx); }
  PadicInt one() const { return PadicInt::one(ctx); }
  PadicInt add(const PadicInt& a, const PadicInt& b) const { return a + b; }
  PadicInt sub(const PadicInt& a, const PadicInt& b) const { return a - b; }
  PadicInt mul(const PadicInt& a, const PadicInt& b) const { return a * b; }
};

// Multiplication matrices of xi^0, ..., xi^(k-1).
std::vector<Matrix<PadicInt>> power_matrices(const tower::UExtElem& xi, unsigned k) {
  std::vector<Matrix<PadicInt>> out;
  out.reserve(k);
  tower::UExtElem power = tower::UExtElem::one(xi.ring());
  for (unsigned i = 0; i < k; ++i) {
    out.push_back(tower::multiplication_matrix(power));
    if (i + 1 < k) power *= xi;
  }
  return out;
}

}  // namespace

Polynomial Polynomial::constant(ContextPtr ctx, unsigned num_vars, const Integer& c) {
  Polynomial out(std::move(ctx), num_vars);
  out.add_term(Exponents(num_vars, 0), c);
  out.normalize();
  return out;
}

Polynomial Polynomial::variable(ContextPtr ctx, unsigned num_vars, unsigned index,
                                const Integer& coefficient) {
  if (index >= num_vars) throw Error(ErrorKind::ShapeMismatch, "variable index out of range");
  Polynomial out(std::move(ctx), num_vars);
  Exponents e(num_vars, 0);
  e[index] = 1;
  out.add_term(std::move(e), coefficient);
  out.normalize();
  return out;
}

void Polynomial::add_term(Exponents e, const Integer& c) {
  if (e.size() != num_vars_) throw Error(ErrorKind::ShapeMismatch, "exponent vector length");
  terms_.emplace_back(std::move(e), c);
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first) {
      merged.back().second += t.second;
    } else {
      merged.push_back(std::move(t));
    }
  }
  terms_.clear();
  for (auto& t : merged) {
    t.second = reduce(t.second, ctx_->modulus());
    if (t.second != 0) terms_.push_back(std::move(t));
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.num_vars_ != num_vars_) throw Error(ErrorKind::ShapeMismatch, "variable count");
  for (const auto& t : rhs.terms_) terms_.push_back(t);
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.num_vars_ != num_vars_) throw Error(ErrorKind::ShapeMismatch, "variable count");
  for (const auto& t : rhs.terms_) terms_.emplace_back(t.first, Integer(-t.second));
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw Error(ErrorKind::ShapeMismatch, "variable count");
  Polynomial out(a.ctx_, a.num_vars_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.terms_.emplace_back(std::move(e), ca * cb);
    }
  }
  out.normalize();
  return out;
}

Polynomial Polynomial::scaled(const Integer& c) const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.second *= c;
  out.normalize();
  return out;
}

Polynomial Polynomial::reduced(unsigned precision) const {
  Polynomial out(padic::Context::make(ctx_->p(), precision), num_vars_);
  for (const auto& t : terms_) out.terms_.push_back(t);
  out.normalize();
  return out;
}

HomogeneousForm::HomogeneousForm(Polynomial poly, unsigned degree)
    : poly_(std::move(poly)), degree_(degree) {
  for (const auto& [e, c] : poly_.terms()) {
    if (total_degree(e) != degree_) {
      throw Error(ErrorKind::InvalidArgument, "monomial of degree " + std::to_string(total_degree(e)) +
                                                  " in a form of degree " + std::to_string(degree_));
    }
  }
}

unsigned HomogeneousForm::essential_variable_count() const {
  std::vector<bool> seen(num_vars(), false);
  for (const auto& [e, c] : poly_.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) seen[i] = true;
    }
  }
  return static_cast<unsigned>(std::count(seen.begin(), seen.end(), true));
}

PadicInt HomogeneousForm::evaluate(std::span<const PadicInt> x) const {
  if (x.size() != num_vars()) {
    throw Error(ErrorKind::ShapeMismatch, "form in " + std::to_string(num_vars()) +
                                              " variables evaluated at a vector of length " +
                                              std::to_string(x.size()));
  }
  const auto& ctx = context();
  for (const auto& xi : x) {
    if (!xi.context()->same_as(*ctx)) {
      throw Error(ErrorKind::ContextMismatch, "evaluation point over a different (p, N)");
    }
  }
  const Integer& m = ctx->modulus();
  // powers[i][e] = x_i^e mod p^N
  std::vector<std::vector<Integer>> powers(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    powers[i].reserve(degree_ + 1);
    powers[i].emplace_back(1);
  }
  for (const auto& [e, c] : poly_.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      while (powers[i].size() <= e[i]) {
        powers[i].push_back(reduce(powers[i].back() * x[i].value(), m));
      }
    }
  }
  Integer acc = 0;
  Integer term;
  for (const auto& [e, c] : poly_.terms()) {
    term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      term *= powers[i][e[i]];
      mpz_fdiv_r(term.get_mpz_t(), term.get_mpz_t(), m.get_mpz_t());
    }
    acc += term;
  }
  return PadicInt(ctx, acc);
}

HomogeneousForm HomogeneousForm::residue_form() const {
  return HomogeneousForm(poly_.reduced(1), degree_);
}

HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b) {
  return HomogeneousForm(a.polynomial() * b.polynomial(), a.degree() + b.degree());
}

HomogeneousForm norm_form_unchecked(const tower::UExtElem& xi, unsigned k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "norm form needs at least one variable");
  const auto& ring = xi.ring();
  const auto& ctx = ring->context();
  const unsigned f = ring->degree();
  const auto mats = power_matrices(xi, k);
  Matrix<Polynomial> entries(f, std::vector<Polynomial>(f, Polynomial(ctx, k)));
  for (unsigned r = 0; r < f; ++r) {
    for (unsigned c = 0; c < f; ++c) {
      Polynomial& entry = entries[r][c];
      Exponents e(k, 0);
      for (unsigned i = 0; i < k; ++i) {
        const auto& coeff = mats[i][r][c].value();
        if (coeff == 0) continue;
        e.assign(k, 0);
        e[i] = 1;
        entry.add_term(e, coeff);
      }
      entry.normalize();
    }
  }
  Polynomial det = berkowitz_determinant(entries, PolynomialOps{ctx, k});
  return HomogeneousForm(std::move(det), f);
}

HomogeneousForm norm_form(const tower::UExtElem& xi, unsigned k) {
  if (!xi.is_unit() || !tower::is_primitive_residue(xi)) {
    throw Error(ErrorKind::NotPrimitive, "generator residue does not generate the residue field");
  }
  if (k > xi.ring()->degree()) {
    throw Error(ErrorKind::InvalidArgument, "more variables than the ring degree");
  }
  return norm_form_unchecked(xi, k);
}

PadicInt norm_of_combination(const tower::UExtElem& xi, std::span<const PadicInt> x) {
  const auto& ring = xi.ring();
  tower::UExtElem acc = tower::UExtElem::zero(ring);
  tower::UExtElem power = tower::UExtElem::one(ring);
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += tower::UExtElem::scalar(ring, x[i]) * power;
    if (i + 1 < x.size()) power *= xi;
  }
  return tower::norm(acc);
}

std::size_t monomial_count(unsigned degree, unsigned num_vars) {
  // C(degree + num_vars - 1, num_vars - 1)
  if (num_vars == 0) return degree == 0 ? 1 : 0;
  const unsigned n = degree + num_vars - 1;
  const unsigned r = std::min(degree, num_vars - 1);
  unsigned __int128 acc = 1;
  for (unsigned i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::size_t>::max()) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(acc);
}

HomogeneousForm norm_minus_scaled_power(const tower::RingPtr& ring, const PadicInt& a) {
  const unsigned n = ring->degree();
  const auto xi = tower::choose_primitive_generator(ring);
  const HomogeneousForm norm = norm_form(xi, n);
  Polynomial out(ring->context(), n + 1);
  for (const auto& [e, c] : norm.polynomial().terms()) {
    Exponents wide = e;
    wide.push_back(0);
    out.add_term(std::move(wide), c);
  }
  Exponents last(n + 1, 0);
  last[n] = n;
  out.add_term(std::move(last), Integer(-a.value()));
  out.normalize();
  return HomogeneousForm(std::move(out), n);
}

std::vector<unsigned> BlockFormSpec::factor_degrees() const {
  std::vector<unsigned> out;
  for (const auto& f : factors) out.push_back(f.ring->degree());
  return out;
}

unsigned default_precision(unsigned target_degree, unsigned valuation_cap) {
  return target_degree * (valuation_cap + 1) + target_degree + 8;
}

namespace {

unsigned to_unsigned(const Integer& v, const char* what, unsigned cap) {
  if (v > cap) {
    throw Error(ErrorKind::BudgetExceeded, std::string(what) + " = " + v.get_str() +
                                               " exceeds the ring-degree cap " + std::to_string(cap));
  }
  return static_cast<unsigned>(v.get_ui());
}

BlockFormSpec realise(arith::SequenceKind kind, unsigned n, unsigned width, unsigned target,
                      const std::vector<unsigned>& degrees, Integer unramified_degree,
                      arith::SigmaSPlan plan, const BuildOptions& options) {
  const unsigned precision = options.precision.value_or(default_precision(target));
  auto ctx = padic::Context::make(options.p, precision);
  tower::StagePlan stage = tower::make_stage(options.p, std::move(unramified_degree),
                                             options.ramification_index, std::move(plan));
  tower::stage_value_group_check(stage, Integer(target));

  std::vector<NormFactor> factors;
  for (unsigned d : degrees) {
    auto ring = tower::UnramifiedRing::make(ctx, d);
    auto gen = tower::choose_primitive_generator(ring);
    factors.push_back({std::move(ring), std::move(gen)});
  }
  BlockFormSpec spec{kind, n, width, target, std::move(factors), PadicInt::prime_power(ctx, 1),
                     std::move(stage)};
  validate_spec(spec);
  return spec;
}

}  // namespace

BlockFormSpec make_pair_spec(unsigned n, const BuildOptions& options) {
  const auto seq = arith::gen_pair_sequence(n, options.search_steps);
  auto plan = arith::derive_plan(seq);
  const auto& entry = seq.back();
  const unsigned cap = options.max_ring_degree;
  const unsigned k = to_unsigned(entry.k, "k_n", cap);
  const unsigned complement = to_unsigned(Integer(entry.p - entry.k), "p_n - k_n", cap);
  const unsigned target = k + complement;
  return realise(arith::SequenceKind::Pair, n, k, target, {k, complement},
                 entry.k * (entry.p - entry.k), std::move(plan), options);
}

BlockFormSpec make_triple_spec(unsigned n, const BuildOptions& options) {
  const auto seq = arith::gen_triple_sequence(n, options.search_steps);
  auto plan = arith::derive_plan(seq);
  const auto& entry = seq.back();
  const unsigned cap = options.max_ring_degree;
  const unsigned t = to_unsigned(entry.t, "t_n", cap);
  const unsigned theta = to_unsigned(entry.theta, "theta_n", cap);
  const unsigned y = to_unsigned(entry.y, "y_n", cap);
  return realise(arith::SequenceKind::Triple, n, t, t + theta + y, {t, theta, y},
                 entry.t * entry.theta * entry.y, std::move(plan), options);
}

BlockFormSpec at_precision(const BlockFormSpec& spec, unsigned precision) {
  BlockFormSpec out{spec.kind, spec.n, spec.block_width, spec.target_degree, {},
                    PadicInt(padic::Context::make(spec.context()->p(), precision), spec.pi.value()),
                    spec.stage};
  for (const auto& f : spec.factors) {
    auto ring = f.ring->at_precision(precision);
    auto gen = f.generator.in_ring(ring);
    out.factors.push_back({std::move(ring), std::move(gen)});
  }
  return out;
}

void validate_spec(const BlockFormSpec& spec) {
  unsigned sum = 0;
  for (const auto& f : spec.factors) {
    sum += f.ring->degree();
    if (!f.ring->context()->same_as(*spec.context())) {
      throw Error(ErrorKind::ContextMismatch, "factor ring over a different (p, N)");
    }
    if (spec.block_width > f.ring->degree()) {
      throw Error(ErrorKind::InvalidArgument, "block width exceeds a factor degree");
    }
    if (!f.generator.is_unit() || !tower::is_primitive_residue(f.generator)) {
      throw Error(ErrorKind::NotPrimitive, "factor of degree " + std::to_string(f.ring->degree()) +
                                               " has a non-primitive generator");
    }
  }
  if (sum != spec.target_degree) {
    throw Error(ErrorKind::InvalidArgument, "factor degrees sum to " + std::to_string(sum) +
                                                ", not p_n = " + std::to_string(spec.target_degree));
  }
  if (spec.pi.valuation() != padic::Valuation::exact(1)) {
    throw Error(ErrorKind::PlanViolation, "v(pi) = " + spec.pi.valuation().to_string() + ", need 1");
  }
  tower::stage_value_group_check(spec.stage, Integer(spec.target_degree));
}

BlockForm::BlockForm(BlockFormSpec spec, std::size_t max_factor_monomials)
    : spec_(std::move(spec)) {
  if (spec_.pi.valuation() != padic::Valuation::exact(1)) {
    throw Error(ErrorKind::PlanViolation, "v(pi) = " + spec_.pi.valuation().to_string() + ", need 1");
  }
  tower::stage_value_group_check(spec_.stage, Integer(spec_.target_degree));
  for (const auto& f : spec_.factors) {
    if (monomial_count(f.ring->degree(), spec_.block_width) <= max_factor_monomials) {
      factor_forms_.emplace_back(norm_form_unchecked(f.generator, spec_.block_width));
    } else {
      factor_forms_.emplace_back(std::nullopt);
    }
  }
}

PadicInt BlockForm::evaluate_g(std::span<const PadicInt> block) const {
  if (block.size() != spec_.block_width) {
    throw Error(ErrorKind::ShapeMismatch, "block of length " + std::to_string(block.size()) +
                                              ", expected " + std::to_string(spec_.block_width));
  }
  PadicInt acc = PadicInt::one(spec_.context());
  for (std::size_t i = 0; i < spec_.factors.size(); ++i) {
    if (factor_forms_[i]) {
      acc *= factor_forms_[i]->evaluate(block);
    } else {
      acc *= norm_of_combination(spec_.factors[i].generator, block);
    }
  }
  return acc;
}

PadicInt BlockForm::evaluate(std::span<const PadicInt> x) const {
  if (x.size() != num_vars()) {
    throw Error(ErrorKind::ShapeMismatch, "f takes " + std::to_string(num_vars()) +
                                              " variables, got " + std::to_string(x.size()));
  }
  const unsigned k = spec_.block_width;
  PadicInt acc = PadicInt::zero(spec_.context());
  PadicInt weight = spec_.pi;
  for (unsigned j = 0; j < blocks(); ++j) {
    acc += weight * evaluate_g(x.subspan(std::size_t{j} * k, k));
    weight *= spec_.pi;
  }
  return acc;
}

HomogeneousForm BlockForm::expand_g(std::size_t max_monomials) const {
  if (monomial_count(degree(), block_width()) > max_monomials) {
    throw Error(ErrorKind::BudgetExceeded, "g has too many monomials to expand");
  }
  const auto& ctx = spec_.context();
  HomogeneousForm acc(Polynomial::constant(ctx, block_width(), 1), 0);
  for (std::size_t i = 0; i < spec_.factors.size(); ++i) {
    acc = acc * (factor_forms_[i] ? *factor_forms_[i]
                                  : norm_form_unchecked(spec_.factors[i].generator, block_width()));
  }
  return acc;
}

HomogeneousForm BlockForm::expand(std::size_t max_monomials) const {
  const HomogeneousForm g = expand_g(max_monomials);
  if (g.num_monomials() * blocks() > max_monomials) {
    throw Error(ErrorKind::BudgetExceeded, "f has too many monomials to expand");
  }
  const unsigned k = block_width();
  Polynomial out(spec_.context(), num_vars());
  PadicInt weight = spec_.pi;
  for (unsigned j = 0; j < blocks(); ++j) {
    for (const auto& [e, c] : g.polynomial().terms()) {
      Exponents wide(num_vars(), 0);
      std::copy(e.begin(), e.end(), wide.begin() + static_cast<std::ptrdiff_t>(j * k));
      out.add_term(std::move(wide), c * weight.value());
    }
    weight *= spec_.pi;
  }
  out.normalize();
  return HomogeneousForm(std::move(out), degree());
}

bool BlockForm::depends_on_all_variables() const {
  const unsigned k = block_width();
  for (const auto& f : spec_.factors) {
    const auto p = f.ring->p();
    std::vector<std::vector<std::uint64_t>> rows;
    tower::UExtElem power = tower::UExtElem::one(f.ring);
    for (unsigned i = 0; i < k; ++i) {
      const gf::FpPoly r = tower::residue(power);
      std::vector<std::uint64_t> row(f.ring->degree(), 0);
      std::copy(r.begin(), r.end(), row.begin());
      rows.push_back(std::move(row));
      power *= f.generator;
    }
    if (gf::rank_mod_p(std::move(rows), p) != k) return false;
  }
  return true;
}

HomogeneousForm build_g(const BlockFormSpec& spec) {
  validate_spec(spec);
  const auto& ctx = spec.context();
  HomogeneousForm acc(Polynomial::constant(ctx, spec.block_width, 1), 0);
  for (const auto& f : spec.factors) acc = acc * norm_form(f.generator, spec.block_width);
  return acc;
}

BlockForm build_f(BlockFormSpec spec) {
  validate_spec(spec);
  return BlockForm(std::move(spec));
}

}  // namespace anisoforge::forms
