#pragma once

// Unramified extensions of Z_p at finite precision, and the bookkeeping for a
// finite stage of the tower: unramified degree F, symbolic ramification index D,
// and the prime plan the stage is built against.

#include <cstdint>
#include <memory>
#include <vector>

#include "anisoforge/arith.hpp"
#include "anisoforge/determinant.hpp"
#include "anisoforge/gf.hpp"
#include "anisoforge/padic.hpp"

namespace anisoforge::tower {

using padic::ContextPtr;
using padic::Integer;
using padic::PadicInt;

/// (Z/p^N)[x] / (modulus), with the modulus monic of degree f and irreducible mod p.
class UnramifiedRing {
 public:
  /// Lex-least irreducible modulus with coefficients in {0..p-1}.
  static std::shared_ptr<const UnramifiedRing> make(ContextPtr ctx, unsigned f);
  /// Explicit monic modulus, coefficients low degree first (size f + 1).
  static std::shared_ptr<const UnramifiedRing> with_modulus(ContextPtr ctx,
                                                            std::vector<Integer> modulus);

  const ContextPtr& context() const { return ctx_; }
  std::uint64_t p() const { return ctx_->p(); }
  unsigned degree() const { return f_; }
  unsigned precision() const { return ctx_->precision(); }
  /// Monic modulus, coefficients reduced into [0, p^N), low degree first.
  const std::vector<Integer>& modulus() const { return modulus_; }
  const gf::FpPoly& residue_modulus() const { return residue_modulus_; }

  /// The same modulus over Z/p^precision (coefficients reduced or zero-padded).
  std::shared_ptr<const UnramifiedRing> at_precision(unsigned precision) const;

  bool same_as(const UnramifiedRing& other) const {
    return ctx_->same_as(*other.ctx_) && modulus_ == other.modulus_;
  }

 private:
  UnramifiedRing(ContextPtr ctx, std::vector<Integer> modulus);

  ContextPtr ctx_;
  unsigned f_;
  std::vector<Integer> modulus_;
  gf::FpPoly residue_modulus_;
};

using RingPtr = std::shared_ptr<const UnramifiedRing>;

class UExtElem {
 public:
  /// Coefficients on the power basis 1, x, ..., x^(f-1); shorter vectors are padded.
  UExtElem(RingPtr ring, std::vector<Integer> coefficients);

  static UExtElem zero(RingPtr ring);
  static UExtElem one(RingPtr ring);
  static UExtElem generator(RingPtr ring);  // the class of x
  static UExtElem scalar(RingPtr ring, const PadicInt& c);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Integer>& coefficients() const { return coeffs_; }
  PadicInt coefficient(std::size_t i) const;

  /// Minimum coefficient valuation (unramified: v(L) = v(K)).
  padic::Valuation valuation() const;
  bool is_zero() const;
  bool is_unit() const;

  UExtElem& operator+=(const UExtElem& rhs);
  UExtElem& operator-=(const UExtElem& rhs);
  UExtElem& operator*=(const UExtElem& rhs);
  friend UExtElem operator+(UExtElem a, const UExtElem& b) { return a += b; }
  friend UExtElem operator-(UExtElem a, const UExtElem& b) { return a -= b; }
  friend UExtElem operator*(UExtElem a, const UExtElem& b) { return a *= b; }
  friend bool operator==(const UExtElem& a, const UExtElem& b);

  UExtElem pow(unsigned long e) const;
  /// Same coefficients read in another ring of equal degree and residue modulus.
  UExtElem in_ring(RingPtr other) const;

 private:
  void require_same(const UExtElem& rhs) const;

  RingPtr ring_;
  std::vector<Integer> coeffs_;
};

/// Coefficient-wise reduction modulo p, as an element of F_p[x]/(residue modulus).
gf::FpPoly residue(const UExtElem& e);

/// True iff the residue of e generates F_{p^f} over F_p, i.e. 1, e, ..., e^(f-1)
/// are independent over F_p.
bool is_primitive_residue(const UExtElem& e);

/// Matrix of multiplication by e on the power basis; column j holds e * x^j.
Matrix<PadicInt> multiplication_matrix(const UExtElem& e);

/// Norm to Z/p^N: the determinant of multiplication by e.
PadicInt norm(const UExtElem& e);

/// Picks a unit with primitive residue: x, x^2, ..., x^(f-1), 1 + x, then seeded
/// random units.
UExtElem choose_primitive_generator(const RingPtr& ring, std::uint64_t seed = 0);

/// [L:K] = e * f, the defect-free case of the fundamental equality.
bool ostrowski_check(std::uint64_t degree, std::uint64_t ramification, std::uint64_t residue_degree,
                     std::uint64_t p);

struct StagePlan {
  std::uint64_t p = 0;
  Integer unramified_degree = 1;    // F
  Integer ramification_index = 1;   // D; value group (1/D) Z
  arith::SigmaSPlan plan;
};

/// Validates that every prime dividing D lies outside Sigma; PlanViolation otherwise.
StagePlan make_stage(std::uint64_t p, Integer unramified_degree, Integer ramification_index,
                     arith::SigmaSPlan plan);

/// True iff v(pi) = 1 is nonzero in (1/D)Z / p_n (1/D)Z, i.e. p_n does not divide D.
/// Throws PlanViolation when p_n | D and PreconditionFailed when p_n is not in Sigma.
bool stage_value_group_check(const StagePlan& stage, const Integer& target);

}  // namespace anisoforge::tower
