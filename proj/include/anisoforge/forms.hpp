#pragma once

// The explicit forms: norm forms on the power basis of a primitive generator, their
// product g over a shared block of variables, the blocked form
//     f(X) = sum_{j=1}^{p_n} pi^j * g(X_j),
// and the norm-minus-scaled-power form used against Chevalley-Warning.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "anisoforge/arith.hpp"
#include "anisoforge/padic.hpp"
#include "anisoforge/tower.hpp"

namespace anisoforge::forms {

using padic::ContextPtr;
using padic::Integer;
using padic::PadicInt;

using Exponents = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial over Z/p^N. Terms are kept sorted by exponent
/// vector with nonzero coefficients in [0, p^N).
class Polynomial {
 public:
  using Term = std::pair<Exponents, Integer>;

  Polynomial(ContextPtr ctx, unsigned num_vars) : ctx_(std::move(ctx)), num_vars_(num_vars) {}
  static Polynomial constant(ContextPtr ctx, unsigned num_vars, const Integer& c);
  static Polynomial variable(ContextPtr ctx, unsigned num_vars, unsigned index,
                             const Integer& coefficient = 1);

  const ContextPtr& context() const { return ctx_; }
  unsigned num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * X^e. Terms may be added in any order; call normalize() afterwards.
  void add_term(Exponents e, const Integer& c);
  void normalize();

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Integer& c) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.ctx_->same_as(*b.ctx_) && a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  /// Reduction of every coefficient into Z/p^precision.
  Polynomial reduced(unsigned precision) const;

 private:
  ContextPtr ctx_;
  unsigned num_vars_;
  std::vector<Term> terms_;
};

class HomogeneousForm {
 public:
  /// Throws InvalidArgument when a term's total degree differs from `degree`.
  HomogeneousForm(Polynomial poly, unsigned degree);

  const Polynomial& polynomial() const { return poly_; }
  const ContextPtr& context() const { return poly_.context(); }
  unsigned num_vars() const { return poly_.num_vars(); }
  unsigned degree() const { return degree_; }
  std::size_t num_monomials() const { return poly_.terms().size(); }

  /// Variables occurring in some monomial with nonzero coefficient.
  unsigned essential_variable_count() const;

  PadicInt evaluate(std::span<const PadicInt> x) const;
  /// Reduction modulo p, coefficients in F_p.
  HomogeneousForm residue_form() const;

  friend bool operator==(const HomogeneousForm&, const HomogeneousForm&) = default;

 private:
  Polynomial poly_;
  unsigned degree_;
};

HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b);

/// N(sum_{i=1}^{k} xi^(i-1) X_i) for the ring of xi: a degree-f form in k variables,
/// f the ring degree. Throws NotPrimitive unless xi is a unit with primitive residue.
HomogeneousForm norm_form(const tower::UExtElem& xi, unsigned k);
/// Same expansion without the primitivity gate (used to exhibit isotropic factors).
HomogeneousForm norm_form_unchecked(const tower::UExtElem& xi, unsigned k);

/// Numeric value of N(sum x_i xi^(i-1)) without expanding the form.
PadicInt norm_of_combination(const tower::UExtElem& xi, std::span<const PadicInt> x);

/// Number of monomials of degree d in k variables, saturating at SIZE_MAX.
std::size_t monomial_count(unsigned degree, unsigned num_vars);

/// N(X_1, ..., X_n) - a X_{n+1}^n, the norm taken on the full power basis of a
/// primitive generator of `ring` (n = ring degree).
HomogeneousForm norm_minus_scaled_power(const tower::RingPtr& ring, const PadicInt& a);

struct NormFactor {
  tower::RingPtr ring;
  tower::UExtElem generator;
};

/// Parameters of one blocked form: entry n of a pair or triple sequence realised
/// over Z_p at precision N.
struct BlockFormSpec {
  arith::SequenceKind kind = arith::SequenceKind::Pair;
  unsigned n = 0;
  unsigned block_width = 0;  // k_n or t_n
  unsigned target_degree = 0;  // p_n
  std::vector<NormFactor> factors;
  PadicInt pi;
  tower::StagePlan stage;

  ContextPtr context() const { return pi.context(); }
  unsigned num_vars() const { return target_degree * block_width; }
  std::vector<unsigned> factor_degrees() const;
};

inline constexpr unsigned kDefaultMaxRingDegree = 256;
inline constexpr unsigned kDefaultValuationCap = 3;

/// Guard-digit policy for audits: p_n (m_cap + 1) + p_n + 8.
unsigned default_precision(unsigned target_degree, unsigned valuation_cap = kDefaultValuationCap);

struct BuildOptions {
  std::uint64_t p = 5;
  std::optional<unsigned> precision;
  Integer ramification_index = 1;
  unsigned max_ring_degree = kDefaultMaxRingDegree;
  std::uint64_t search_steps = arith::kDefaultSearchSteps;
};

/// Generates the sequence up to n, derives the plan, and realises entry n.
/// PlanViolation when p_n divides the ramification index.
BlockFormSpec make_pair_spec(unsigned n, const BuildOptions& options = {});
BlockFormSpec make_triple_spec(unsigned n, const BuildOptions& options = {});

/// The same spec over Z/p^precision: rings, generators and pi re-read at the new
/// precision (zero-padded when raising it).
BlockFormSpec at_precision(const BlockFormSpec& spec, unsigned precision);

/// Checks the BlockFormSpec invariants: factor degrees sum to p_n, generators
/// primitive, pi of valuation 1, stage value-group condition.
void validate_spec(const BlockFormSpec& spec);

/// The form f, kept factored: each block evaluates g as a product of norms.
class BlockForm {
 public:
  /// PlanViolation when v(pi) != 1 or the stage check fails. Generators are not
  /// required to be primitive here; certification reports that separately.
  explicit BlockForm(BlockFormSpec spec, std::size_t max_factor_monomials = 100'000);

  const BlockFormSpec& spec() const { return spec_; }
  unsigned degree() const { return spec_.target_degree; }
  unsigned num_vars() const { return spec_.num_vars(); }
  unsigned block_width() const { return spec_.block_width; }
  unsigned blocks() const { return spec_.target_degree; }

  /// Expanded norm form of each factor; empty when the expansion would exceed the
  /// monomial budget, in which case evaluation goes through numeric norms.
  const std::vector<std::optional<HomogeneousForm>>& factor_forms() const { return factor_forms_; }

  PadicInt evaluate_g(std::span<const PadicInt> block) const;
  PadicInt evaluate(std::span<const PadicInt> x) const;

  /// Expansions, refused with BudgetExceeded above `max_monomials`.
  HomogeneousForm expand_g(std::size_t max_monomials = 200'000) const;
  HomogeneousForm expand(std::size_t max_monomials = 200'000) const;

  /// Each factor's coordinate matrix of 1, xi, ..., xi^(k-1) has rank k mod p, so
  /// the form depends on all p_n * k variables.
  bool depends_on_all_variables() const;

 private:
  BlockFormSpec spec_;
  std::vector<std::optional<HomogeneousForm>> factor_forms_;
};

HomogeneousForm build_g(const BlockFormSpec& spec);
BlockForm build_f(BlockFormSpec spec);

}  // namespace anisoforge::forms
