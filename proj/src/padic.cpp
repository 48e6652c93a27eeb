#include "anisoforge/padic.hpp"

#include "anisoforge/arith.hpp"
#include "anisoforge/error.hpp"

namespace anisoforge::padic {

Context::Context(std::uint64_t p, unsigned precision)
    : p_(p), precision_(precision), prime_(static_cast<unsigned long>(p)) {
  mpz_pow_ui(modulus_.get_mpz_t(), prime_.get_mpz_t(), precision);
}

std::shared_ptr<const Context> Context::make(std::uint64_t p, unsigned precision) {
  if (precision < 1) throw Error(ErrorKind::InvalidArgument, "precision must be >= 1");
  if (!arith::is_prime(p)) {
    throw Error(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  }
  return std::shared_ptr<const Context>(new Context(p, precision));
}

std::string Valuation::to_string() const {
  return exact_ ? std::to_string(value_) : ">=" + std::to_string(value_);
}

PadicInt::PadicInt(ContextPtr ctx, const Integer& value) : ctx_(std::move(ctx)) {
  mpz_fdiv_r(value_.get_mpz_t(), value.get_mpz_t(), ctx_->modulus().get_mpz_t());
}

PadicInt PadicInt::prime_power(ContextPtr ctx, unsigned k) {
  Integer v;
  mpz_pow_ui(v.get_mpz_t(), ctx->prime().get_mpz_t(), k);
  return PadicInt(std::move(ctx), v);
}

Valuation PadicInt::valuation() const {
  if (value_ == 0) return Valuation::at_least(ctx_->precision());
  Integer rest = value_;
  unsigned v = 0;
  const unsigned long p = static_cast<unsigned long>(ctx_->p());
  while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    ++v;
  }
  return Valuation::exact(v);
}

bool PadicInt::is_unit() const {
  return !mpz_divisible_ui_p(value_.get_mpz_t(), static_cast<unsigned long>(ctx_->p()));
}

std::uint64_t PadicInt::residue() const {
  return mpz_fdiv_ui(value_.get_mpz_t(), static_cast<unsigned long>(ctx_->p()));
}

void PadicInt::require_same(const PadicInt& rhs) const {
  if (!ctx_->same_as(*rhs.ctx_)) {
    throw Error(ErrorKind::ContextMismatch,
                "operands over (p=" + std::to_string(p()) + ", N=" + std::to_string(precision()) +
                    ") and (p=" + std::to_string(rhs.p()) +
                    ", N=" + std::to_string(rhs.precision()) + ")");
  }
}

PadicInt PadicInt::operator-() const { return PadicInt(ctx_, Integer(-value_)); }

PadicInt& PadicInt::operator+=(const PadicInt& rhs) {
  require_same(rhs);
  value_ += rhs.value_;
  if (value_ >= ctx_->modulus()) value_ -= ctx_->modulus();
  return *this;
}

PadicInt& PadicInt::operator-=(const PadicInt& rhs) {
  require_same(rhs);
  value_ -= rhs.value_;
  if (value_ < 0) value_ += ctx_->modulus();
  return *this;
}

PadicInt& PadicInt::operator*=(const PadicInt& rhs) {
  require_same(rhs);
  value_ *= rhs.value_;
  mpz_fdiv_r(value_.get_mpz_t(), value_.get_mpz_t(), ctx_->modulus().get_mpz_t());
  return *this;
}

bool operator==(const PadicInt& a, const PadicInt& b) {
  return a.ctx_->same_as(*b.ctx_) && a.value_ == b.value_;
}

PadicInt PadicInt::pow(unsigned long e) const {
  Integer out;
  mpz_powm_ui(out.get_mpz_t(), value_.get_mpz_t(), e, ctx_->modulus().get_mpz_t());
  return PadicInt(ctx_, out);
}

PadicInt PadicInt::inverse() const {
  if (!is_unit()) {
    throw Error(ErrorKind::PreconditionFailed, "inverse of a non-unit " + value_.get_str());
  }
  Integer out;
  mpz_invert(out.get_mpz_t(), value_.get_mpz_t(), ctx_->modulus().get_mpz_t());
  return PadicInt(ctx_, out);
}

PadicInt PadicInt::divide_by_prime_power(unsigned k) const {
  const Valuation v = valuation();
  if (v.is_exact() && v.value() < k) {
    throw Error(ErrorKind::PreconditionFailed,
                "v(x) = " + v.to_string() + " < " + std::to_string(k));
  }
  if (k > precision()) throw Error(ErrorKind::PrecisionExhausted, "shift beyond precision");
  Integer pk;
  mpz_pow_ui(pk.get_mpz_t(), ctx_->prime().get_mpz_t(), k);
  Integer out;
  mpz_divexact(out.get_mpz_t(), value_.get_mpz_t(), pk.get_mpz_t());
  return PadicInt(ctx_, out);
}

PadicInt PadicInt::with_precision(unsigned precision) const {
  return PadicInt(Context::make(p(), precision), value_);
}

PadicPoly::PadicPoly(ContextPtr ctx, std::vector<PadicInt> coefficients)
    : ctx_(std::move(ctx)), coeffs_(std::move(coefficients)) {
  for (const auto& c : coeffs_) {
    if (!c.context()->same_as(*ctx_)) {
      throw Error(ErrorKind::ContextMismatch, "polynomial coefficient over a different context");
    }
  }
}

PadicPoly PadicPoly::from_integers(ContextPtr ctx, std::span<const long> coefficients) {
  std::vector<PadicInt> cs;
  cs.reserve(coefficients.size());
  for (long c : coefficients) cs.emplace_back(ctx, c);
  return PadicPoly(std::move(ctx), std::move(cs));
}

int PadicPoly::degree() const {
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
    if (!coeffs_[static_cast<std::size_t>(i)].is_zero()) return i;
  }
  return -1;
}

PadicInt PadicPoly::operator()(const PadicInt& x) const {
  PadicInt acc = PadicInt::zero(ctx_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

PadicPoly PadicPoly::derivative() const {
  std::vector<PadicInt> out;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    out.push_back(coeffs_[i] * PadicInt(ctx_, static_cast<long>(i)));
  }
  return PadicPoly(ctx_, std::move(out));
}

namespace {

PadicPoly lift_to(const PadicPoly& f, const ContextPtr& ctx) {
  std::vector<PadicInt> cs;
  cs.reserve(f.coefficients().size());
  for (const auto& c : f.coefficients()) cs.emplace_back(ctx, c.value());
  return PadicPoly(ctx, std::move(cs));
}

}  // namespace

PadicInt hensel_lift(const PadicPoly& f, const PadicInt& a) {
  const auto& ctx = f.context();
  if (!a.context()->same_as(*ctx)) {
    throw Error(ErrorKind::ContextMismatch, "hensel_lift: point and polynomial disagree");
  }
  const unsigned n = ctx->precision();
  const PadicPoly df = f.derivative();
  const Valuation vd = df(a).valuation();
  const Valuation vf = f(a).valuation();
  if (!vd.is_exact()) {
    throw Error(ErrorKind::PrecisionExhausted, "f'(a) vanishes at precision " + std::to_string(n));
  }
  const unsigned s = vd.value();
  if (!vf.is_exact()) {
    if (2 * s >= n) {
      throw Error(ErrorKind::PrecisionExhausted,
                  "f(a) vanishes mod p^N but 2 v(f'(a)) >= N: root not separated");
    }
    return a;
  }
  if (2 * s >= vf.value()) {
    throw Error(ErrorKind::PreconditionFailed, "2 v(f'(a)) = " + std::to_string(2 * s) +
                                                   " >= v(f(a)) = " + vf.to_string());
  }

  const unsigned work = n + 2 * s + 1;
  const auto wctx = Context::make(ctx->p(), work);
  const PadicPoly wf = lift_to(f, wctx);
  const PadicPoly wdf = wf.derivative();
  PadicInt c(wctx, a.value());
  for (int iter = 0; iter < 256; ++iter) {
    const PadicInt fc = wf(c);
    const Valuation v = fc.valuation();
    if (!v.is_exact() || v.value() >= n + 2 * s) {
      PadicInt root(ctx, c.value());
      if (!f(root).is_zero()) throw Error(ErrorKind::InternalError, "lifted value is not a root");
      return root;
    }
    const PadicInt dc = wdf(c);
    if (dc.valuation() != Valuation::exact(s)) {
      throw Error(ErrorKind::InternalError, "v(f'(c)) drifted during Newton iteration");
    }
    c -= fc.divide_by_prime_power(s) * dc.divide_by_prime_power(s).inverse();
  }
  throw Error(ErrorKind::PrecisionExhausted, "Newton iteration did not converge");
}

PadicInt teichmuller_root(const PadicInt& u) {
  if (!u.is_unit()) throw Error(ErrorKind::PreconditionFailed, "teichmuller_root of a non-unit");
  const auto& ctx = u.context();
  std::vector<PadicInt> cs(u.p(), PadicInt::zero(ctx));
  cs.front() = PadicInt(ctx, -1L);
  cs.back() = PadicInt::one(ctx);
  return hensel_lift(PadicPoly(ctx, std::move(cs)), u);
}

}  // namespace anisoforge::padic
