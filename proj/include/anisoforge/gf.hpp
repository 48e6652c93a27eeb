#pragma once

// Residue-level finite field arithmetic: polynomials over F_p, irreducibility, and
// table-driven F_{p^e} for exhaustive scans.

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace anisoforge::gf {

/// Coefficients over F_p, lowest degree first. Trailing zeros are trimmed by the
/// routines that return a polynomial.
using FpPoly = std::vector<std::uint64_t>;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);

void trim(FpPoly& a);
FpPoly poly_sub(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly poly_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p);
/// Remainder of a by a nonzero b.
FpPoly poly_rem(FpPoly a, const FpPoly& b, std::uint64_t p);
FpPoly poly_mul_mod(const FpPoly& a, const FpPoly& b, const FpPoly& modulus, std::uint64_t p);
FpPoly poly_pow_mod(const FpPoly& base, const mpz_class& e, const FpPoly& modulus,
                    std::uint64_t p);
FpPoly poly_gcd(FpPoly a, FpPoly b, std::uint64_t p);

/// Rabin's test for a monic polynomial of degree >= 1.
bool is_irreducible(const FpPoly& monic, std::uint64_t p);

/// Least monic irreducible of degree f, ordering coefficient vectors from x^(f-1)
/// down to the constant term.
FpPoly lex_least_irreducible(std::uint64_t p, unsigned f);

/// Rank over F_p of a row-major matrix.
std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p);

/// Norm from F_{p^f} = F_p[x]/(modulus) down to F_p, as a^((p^f - 1)/(p - 1)).
std::uint64_t field_norm(const FpPoly& a, const FpPoly& modulus, std::uint64_t p);

/// F_q with q = p^e, elements encoded as sum c_i p^i of their coefficients on the
/// power basis of F_p[x]/(modulus). Multiplication runs through log/exp tables.
class GaloisField {
 public:
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 24;

  GaloisField(std::uint64_t p, unsigned e);

  std::uint64_t p() const { return p_; }
  unsigned degree() const { return e_; }
  std::uint64_t order() const { return q_; }
  const FpPoly& modulus() const { return modulus_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t a, std::uint64_t k) const;
  /// log of a nonzero element with respect to the table generator.
  std::uint32_t log(std::uint64_t a) const { return log_[a]; }
  std::uint64_t exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  FpPoly to_poly(std::uint64_t a) const;
  std::uint64_t from_poly(const FpPoly& a) const;

 private:
  std::uint64_t p_;
  unsigned e_;
  std::uint64_t q_;
  FpPoly modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

}  // namespace anisoforge::gf
