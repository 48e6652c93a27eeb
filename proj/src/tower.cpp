#include "anisoforge/tower.hpp"

#include <random>

#include "anisoforge/error.hpp"

namespace anisoforge::tower {
namespace {

Integer reduce(const Integer& v, const Integer& modulus) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

struct PadicOps {
  ContextPtr ctx;
  PadicInt zero() const { return PadicInt::zero(ctx); }
  PadicInt one() const { return PadicInt::one(ctx); }
  PadicInt add(const PadicInt& a, const PadicInt& b) const { return a + b; }
  PadicInt sub(const PadicInt& a, const PadicInt& b) const { return a - b; }
  PadicInt mul(const PadicInt& a, const PadicInt& b) const { return a * b; }
};

}  // namespace

UnramifiedRing::UnramifiedRing(ContextPtr ctx, std::vector<Integer> modulus)
    : ctx_(std::move(ctx)), f_(static_cast<unsigned>(modulus.size() - 1)) {
  for (auto& c : modulus) c = reduce(c, ctx_->modulus());
  modulus_ = std::move(modulus);
  residue_modulus_.reserve(modulus_.size());
  for (const auto& c : modulus_) {
    residue_modulus_.push_back(mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(ctx_->p())));
  }
}

std::shared_ptr<const UnramifiedRing> UnramifiedRing::make(ContextPtr ctx, unsigned f) {
  const gf::FpPoly m = gf::lex_least_irreducible(ctx->p(), f);
  std::vector<Integer> coeffs;
  coeffs.reserve(m.size());
  for (auto c : m) coeffs.emplace_back(static_cast<unsigned long>(c));
  return std::shared_ptr<const UnramifiedRing>(new UnramifiedRing(std::move(ctx), std::move(coeffs)));
}

std::shared_ptr<const UnramifiedRing> UnramifiedRing::with_modulus(ContextPtr ctx,
                                                                   std::vector<Integer> modulus) {
  if (modulus.size() < 2) throw Error(ErrorKind::InvalidArgument, "modulus must have degree >= 1");
  auto ring = std::shared_ptr<const UnramifiedRing>(new UnramifiedRing(std::move(ctx), std::move(modulus)));
  if (ring->modulus_.back() != 1) throw Error(ErrorKind::InvalidArgument, "modulus must be monic");
  if (!gf::is_irreducible(ring->residue_modulus_, ring->p())) {
    throw Error(ErrorKind::InvalidArgument, "modulus is reducible modulo p");
  }
  return ring;
}

std::shared_ptr<const UnramifiedRing> UnramifiedRing::at_precision(unsigned precision) const {
  return std::shared_ptr<const UnramifiedRing>(
      new UnramifiedRing(padic::Context::make(p(), precision), modulus_));
}

UExtElem::UExtElem(RingPtr ring, std::vector<Integer> coefficients) : ring_(std::move(ring)) {
  const unsigned f = ring_->degree();
  if (coefficients.size() > f) {
    throw Error(ErrorKind::ShapeMismatch, "element has more than f coefficients");
  }
  coefficients.resize(f, Integer(0));
  for (auto& c : coefficients) c = reduce(c, ring_->context()->modulus());
  coeffs_ = std::move(coefficients);
}

UExtElem UExtElem::zero(RingPtr ring) { return UExtElem(std::move(ring), {}); }

UExtElem UExtElem::one(RingPtr ring) { return UExtElem(std::move(ring), {Integer(1)}); }

UExtElem UExtElem::generator(RingPtr ring) {
  if (ring->degree() == 1) {
    // x is the root of the linear modulus x + c, i.e. -c.
    return UExtElem(ring, {Integer(-ring->modulus()[0])});
  }
  return UExtElem(std::move(ring), {Integer(0), Integer(1)});
}

UExtElem UExtElem::scalar(RingPtr ring, const PadicInt& c) {
  return UExtElem(std::move(ring), {c.value()});
}

PadicInt UExtElem::coefficient(std::size_t i) const {
  return PadicInt(ring_->context(), coeffs_.at(i));
}

padic::Valuation UExtElem::valuation() const {
  padic::Valuation best = padic::Valuation::at_least(ring_->precision());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto v = coefficient(i).valuation();
    if (v.is_exact() && (!best.is_exact() || v.value() < best.value())) best = v;
  }
  return best;
}

bool UExtElem::is_zero() const {
  for (const auto& c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

bool UExtElem::is_unit() const { return !residue(*this).empty(); }

void UExtElem::require_same(const UExtElem& rhs) const {
  if (ring_ != rhs.ring_ && !ring_->same_as(*rhs.ring_)) {
    throw Error(ErrorKind::ContextMismatch, "elements of different unramified rings");
  }
}

UExtElem& UExtElem::operator+=(const UExtElem& rhs) {
  require_same(rhs);
  const auto& m = ring_->context()->modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] += rhs.coeffs_[i];
    if (coeffs_[i] >= m) coeffs_[i] -= m;
  }
  return *this;
}

UExtElem& UExtElem::operator-=(const UExtElem& rhs) {
  require_same(rhs);
  const auto& m = ring_->context()->modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] -= rhs.coeffs_[i];
    if (coeffs_[i] < 0) coeffs_[i] += m;
  }
  return *this;
}

UExtElem& UExtElem::operator*=(const UExtElem& rhs) {
  require_same(rhs);
  const unsigned f = ring_->degree();
  const auto& m = ring_->context()->modulus();
  const auto& mod_poly = ring_->modulus();
  std::vector<Integer> prod(2 * f - 1, Integer(0));
  for (unsigned i = 0; i < f; ++i) {
    if (coeffs_[i] == 0) continue;
    for (unsigned j = 0; j < f; ++j) prod[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  // x^f = -(m_0 + m_1 x + ... + m_{f-1} x^{f-1})
  for (std::size_t d = prod.size(); d-- > f;) {
    const Integer top = reduce(prod[d], m);
    if (top == 0) continue;
    for (unsigned j = 0; j < f; ++j) prod[d - f + j] -= top * mod_poly[j];
  }
  for (unsigned i = 0; i < f; ++i) coeffs_[i] = reduce(prod[i], m);
  return *this;
}

bool operator==(const UExtElem& a, const UExtElem& b) {
  return a.ring_->same_as(*b.ring_) && a.coeffs_ == b.coeffs_;
}

UExtElem UExtElem::pow(unsigned long e) const {
  UExtElem result = one(ring_);
  UExtElem base = *this;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

UExtElem UExtElem::in_ring(RingPtr other) const {
  if (other->degree() != ring_->degree() || other->p() != ring_->p()) {
    throw Error(ErrorKind::ContextMismatch, "rings of different degree or characteristic");
  }
  return UExtElem(std::move(other), coeffs_);
}

gf::FpPoly residue(const UExtElem& e) {
  gf::FpPoly out;
  out.reserve(e.coefficients().size());
  const auto p = static_cast<unsigned long>(e.ring()->p());
  for (const auto& c : e.coefficients()) out.push_back(mpz_fdiv_ui(c.get_mpz_t(), p));
  gf::trim(out);
  return out;
}

bool is_primitive_residue(const UExtElem& e) {
  const auto& ring = e.ring();
  const unsigned f = ring->degree();
  const std::uint64_t p = ring->p();
  const gf::FpPoly r = residue(e);
  if (r.empty()) return false;
  std::vector<std::vector<std::uint64_t>> rows;
  gf::FpPoly power{1};
  for (unsigned i = 0; i < f; ++i) {
    std::vector<std::uint64_t> row(f, 0);
    for (std::size_t j = 0; j < power.size(); ++j) row[j] = power[j];
    rows.push_back(std::move(row));
    power = gf::poly_mul_mod(power, r, ring->residue_modulus(), p);
  }
  return gf::rank_mod_p(std::move(rows), p) == f;
}

Matrix<PadicInt> multiplication_matrix(const UExtElem& e) {
  const auto& ring = e.ring();
  const unsigned f = ring->degree();
  const auto& ctx = ring->context();
  Matrix<PadicInt> m(f, std::vector<PadicInt>(f, PadicInt::zero(ctx)));
  UExtElem column = e;
  const UExtElem x = UExtElem(ring, f == 1 ? std::vector<Integer>{} : std::vector<Integer>{0, 1});
  for (unsigned j = 0; j < f; ++j) {
    for (unsigned i = 0; i < f; ++i) m[i][j] = column.coefficient(i);
    if (j + 1 < f) column *= x;
  }
  return m;
}

PadicInt norm(const UExtElem& e) {
  return berkowitz_determinant(multiplication_matrix(e), PadicOps{e.ring()->context()});
}

UExtElem choose_primitive_generator(const RingPtr& ring, std::uint64_t seed) {
  const unsigned f = ring->degree();
  if (f == 1) return UExtElem::one(ring);
  const UExtElem x = UExtElem::generator(ring);
  for (unsigned k = 1; k < f; ++k) {
    UExtElem candidate = x.pow(k);
    if (candidate.is_unit() && is_primitive_residue(candidate)) return candidate;
  }
  UExtElem one_plus_x = UExtElem::one(ring) + x;
  if (one_plus_x.is_unit() && is_primitive_residue(one_plus_x)) return one_plus_x;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> digit(0, ring->p() - 1);
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    std::vector<Integer> cs(f);
    for (auto& c : cs) c = static_cast<unsigned long>(digit(rng));
    UExtElem candidate(ring, std::move(cs));
    if (candidate.is_unit() && is_primitive_residue(candidate)) return candidate;
  }
  throw Error(ErrorKind::NotPrimitive, "no primitive residue generator found");
}

bool ostrowski_check(std::uint64_t degree, std::uint64_t ramification, std::uint64_t residue_degree,
                     std::uint64_t /*p*/) {
  if (degree == 0 || ramification == 0 || residue_degree == 0) {
    throw Error(ErrorKind::InvalidArgument, "degrees must be positive");
  }
  return degree == ramification * residue_degree;
}

StagePlan make_stage(std::uint64_t p, Integer unramified_degree, Integer ramification_index,
                     arith::SigmaSPlan plan) {
  if (ramification_index < 1 || unramified_degree < 1) {
    throw Error(ErrorKind::InvalidArgument, "stage degrees must be positive");
  }
  if (ramification_index > 1) {
    for (const auto& q : arith::prime_factors(ramification_index)) {
      if (plan.in_sigma(q)) {
        throw Error(ErrorKind::PlanViolation,
                    "ramification index " + ramification_index.get_str() +
                        " has the prime " + q.get_str() + " from Sigma");
      }
    }
  }
  return {p, std::move(unramified_degree), std::move(ramification_index), std::move(plan)};
}

bool stage_value_group_check(const StagePlan& stage, const Integer& target) {
  if (!stage.plan.in_sigma(target)) {
    throw Error(ErrorKind::PreconditionFailed, target.get_str() + " is not in Sigma");
  }
  if (mpz_divisible_p(stage.ramification_index.get_mpz_t(), target.get_mpz_t())) {
    throw Error(ErrorKind::PlanViolation,
                target.get_str() + " divides the ramification index " +
                    stage.ramification_index.get_str());
  }
  return true;
}

}  // namespace anisoforge::tower
