#pragma once

// Truncated p-adic integers: residues modulo p^N with exact valuation tracking.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace anisoforge::padic {

using Integer = mpz_class;

/// Shared (p, N) pair plus the cached modulus p^N.
class Context {
 public:
  static std::shared_ptr<const Context> make(std::uint64_t p, unsigned precision);

  std::uint64_t p() const { return p_; }
  unsigned precision() const { return precision_; }
  const Integer& modulus() const { return modulus_; }
  const Integer& prime() const { return prime_; }

  bool same_as(const Context& other) const {
    return p_ == other.p_ && precision_ == other.precision_;
  }

 private:
  Context(std::uint64_t p, unsigned precision);

  std::uint64_t p_;
  unsigned precision_;
  Integer prime_;
  Integer modulus_;
};

using ContextPtr = std::shared_ptr<const Context>;

/// v(x) for a truncated value: exact below N, otherwise only "at least N".
class Valuation {
 public:
  static Valuation exact(unsigned v) { return Valuation(v, true); }
  static Valuation at_least(unsigned n) { return Valuation(n, false); }

  bool is_exact() const { return exact_; }
  unsigned value() const { return value_; }

  friend bool operator==(const Valuation&, const Valuation&) = default;
  std::string to_string() const;

 private:
  Valuation(unsigned v, bool exact) : value_(v), exact_(exact) {}
  unsigned value_;
  bool exact_;
};

class PadicInt {
 public:
  PadicInt(ContextPtr ctx, const Integer& value);
  PadicInt(ContextPtr ctx, long value) : PadicInt(std::move(ctx), Integer(value)) {}

  static PadicInt zero(ContextPtr ctx) { return PadicInt(std::move(ctx), 0L); }
  static PadicInt one(ContextPtr ctx) { return PadicInt(std::move(ctx), 1L); }
  /// p^k, truncated.
  static PadicInt prime_power(ContextPtr ctx, unsigned k);

  const ContextPtr& context() const { return ctx_; }
  std::uint64_t p() const { return ctx_->p(); }
  unsigned precision() const { return ctx_->precision(); }
  /// Canonical representative in [0, p^N).
  const Integer& value() const { return value_; }

  Valuation valuation() const;
  bool is_zero() const { return value_ == 0; }
  bool is_unit() const;
  /// Residue class modulo p.
  std::uint64_t residue() const;

  PadicInt operator-() const;
  PadicInt& operator+=(const PadicInt& rhs);
  PadicInt& operator-=(const PadicInt& rhs);
  PadicInt& operator*=(const PadicInt& rhs);
  friend PadicInt operator+(PadicInt a, const PadicInt& b) { return a += b; }
  friend PadicInt operator-(PadicInt a, const PadicInt& b) { return a -= b; }
  friend PadicInt operator*(PadicInt a, const PadicInt& b) { return a *= b; }
  friend bool operator==(const PadicInt& a, const PadicInt& b);

  PadicInt pow(unsigned long e) const;
  /// Inverse of a unit; PreconditionFailed otherwise.
  PadicInt inverse() const;
  /// Exact quotient by p^k; PreconditionFailed when v(x) < k. The result is only
  /// determined modulo p^(N-k), and is returned with its top k digits zero.
  PadicInt divide_by_prime_power(unsigned k) const;
  /// Same value at another precision. Raising precision pads with zero digits.
  PadicInt with_precision(unsigned precision) const;

 private:
  void require_same(const PadicInt& rhs) const;

  ContextPtr ctx_;
  Integer value_;
};

/// Polynomial over the truncated valuation ring, coefficients low degree first.
class PadicPoly {
 public:
  PadicPoly(ContextPtr ctx, std::vector<PadicInt> coefficients);
  static PadicPoly from_integers(ContextPtr ctx, std::span<const long> coefficients);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<PadicInt>& coefficients() const { return coeffs_; }
  /// Index of the last nonzero coefficient, or -1 for the zero polynomial.
  int degree() const;

  PadicInt operator()(const PadicInt& x) const;
  PadicPoly derivative() const;

 private:
  ContextPtr ctx_;
  std::vector<PadicInt> coeffs_;
};

/// Newton lifting under the condition 2 v(f'(a)) < v(f(a)). Returns c with
/// f(c) = 0 mod p^N and v(c - a) = v(f(a)) - v(f'(a)).
PadicInt hensel_lift(const PadicPoly& f, const PadicInt& a);

/// The root of X^(p-1) - 1 congruent to the unit u modulo p.
PadicInt teichmuller_root(const PadicInt& u);

}  // namespace anisoforge::padic
