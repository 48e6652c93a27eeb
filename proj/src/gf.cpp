#include "anisoforge/gf.hpp"

#include <algorithm>

#include "anisoforge/arith.hpp"
#include "anisoforge/error.hpp"

namespace anisoforge::gf {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw Error(ErrorKind::PreconditionFailed, "inverse of 0 in F_p");
  return pow_mod(a, p - 2, p);
}

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly poly_sub(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  FpPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t x = i < a.size() ? a[i] : 0;
    const std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  trim(out);
  return out;
}

FpPoly poly_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = (out[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
  }
  trim(out);
  return out;
}

FpPoly poly_rem(FpPoly a, const FpPoly& b_in, std::uint64_t p) {
  FpPoly b = b_in;
  trim(b);
  if (b.empty()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  trim(a);
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  const std::size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    const std::uint64_t factor = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) {
      a[shift + j] = (a[shift + j] + p - mul_mod(factor, b[j], p)) % p;
    }
    trim(a);
  }
  return a;
}

FpPoly poly_mul_mod(const FpPoly& a, const FpPoly& b, const FpPoly& modulus, std::uint64_t p) {
  return poly_rem(poly_mul(a, b, p), modulus, p);
}

FpPoly poly_pow_mod(const FpPoly& base, const mpz_class& e, const FpPoly& modulus,
                    std::uint64_t p) {
  FpPoly result = poly_rem(FpPoly{1}, modulus, p);
  FpPoly b = poly_rem(base, modulus, p);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = poly_mul_mod(result, result, modulus, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = poly_mul_mod(result, b, modulus, p);
  }
  return result;
}

FpPoly poly_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t inv = inv_mod(a.back(), p);
    for (auto& c : a) c = mul_mod(c, inv, p);
  }
  return a;
}

bool is_irreducible(const FpPoly& monic, std::uint64_t p) {
  FpPoly g = monic;
  trim(g);
  if (g.size() < 2) return false;
  const unsigned f = static_cast<unsigned>(g.size() - 1);
  if (f == 1) return true;
  const mpz_class pp = static_cast<unsigned long>(p);
  const FpPoly x{0, 1};

  // x^(p^i) mod g for i = 0..f
  std::vector<FpPoly> frob{poly_rem(x, g, p)};
  for (unsigned i = 1; i <= f; ++i) frob.push_back(poly_pow_mod(frob.back(), pp, g, p));

  if (poly_sub(frob[f], frob[0], p) != FpPoly{}) return false;
  for (const auto& r : arith::prime_factors(mpz_class(f))) {
    const unsigned sub = f / static_cast<unsigned>(r.get_ui());
    const FpPoly h = poly_sub(frob[sub], frob[0], p);
    if (poly_gcd(g, h, p).size() != 1) return false;
  }
  return true;
}

FpPoly lex_least_irreducible(std::uint64_t p, unsigned f) {
  if (f < 1) throw Error(ErrorKind::InvalidArgument, "degree must be >= 1");
  if (f == 1) return FpPoly{0, 1};
  // Enumerate the low coefficients as a base-p counter whose most significant digit
  // is the x^(f-1) coefficient; counter order is then the required lex order.
  FpPoly candidate(f + 1, 0);
  candidate[f] = 1;
  for (;;) {
    if (candidate[0] != 0 && is_irreducible(candidate, p)) return candidate;
    std::size_t i = 0;
    while (i < f && ++candidate[i] == p) candidate[i++] = 0;
    if (i == f) throw Error(ErrorKind::InternalError, "no irreducible polynomial found");
  }
}

std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] % p == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint64_t inv = inv_mod(rows[rank][c], p);
    for (auto& v : rows[rank]) v = mul_mod(v % p, inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] % p == 0) continue;
      const std::uint64_t factor = rows[r][c] % p;
      for (std::size_t k = 0; k < cols; ++k) {
        rows[r][k] = (rows[r][k] % p + p - mul_mod(factor, rows[rank][k], p)) % p;
      }
    }
    ++rank;
  }
  return rank;
}

std::uint64_t field_norm(const FpPoly& a, const FpPoly& modulus, std::uint64_t p) {
  const unsigned f = static_cast<unsigned>(modulus.size() - 1);
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), f);
  const mpz_class e = (q - 1) / static_cast<unsigned long>(p - 1);
  const FpPoly r = poly_pow_mod(a, e, modulus, p);
  if (r.size() > 1) throw Error(ErrorKind::InternalError, "field norm left F_p");
  return r.empty() ? 0 : r[0];
}

GaloisField::GaloisField(std::uint64_t p, unsigned e) : p_(p), e_(e), q_(1) {
  if (e < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  if (!arith::is_prime(p)) throw Error(ErrorKind::InvalidArgument, "characteristic not prime");
  for (unsigned i = 0; i < e; ++i) {
    if (q_ > kMaxOrder / p) {
      throw Error(ErrorKind::BudgetExceeded,
                  "F_q with q = " + std::to_string(p) + "^" + std::to_string(e) +
                      " exceeds the table limit 2^24");
    }
    q_ *= p;
  }
  modulus_ = lex_least_irreducible(p, e);

  const std::uint64_t group = q_ - 1;
  const auto factors = arith::prime_factors(mpz_class(static_cast<unsigned long>(group)));
  auto is_generator = [&](std::uint64_t g) {
    const FpPoly gp = to_poly(g);
    for (const auto& r : factors) {
      const mpz_class k = static_cast<unsigned long>(group / r.get_ui());
      if (poly_pow_mod(gp, k, modulus_, p_) == FpPoly{1}) return false;
    }
    return true;
  };
  std::uint64_t gen = 1;
  if (q_ > 2) {
    gen = 2;
    while (!is_generator(gen)) ++gen;
  }

  exp_.resize(group);
  log_.assign(q_, 0);
  const FpPoly gp = to_poly(gen);
  FpPoly cur{1};
  for (std::uint64_t k = 0; k < group; ++k) {
    const std::uint64_t enc = from_poly(cur);
    exp_[k] = static_cast<std::uint32_t>(enc);
    log_[enc] = static_cast<std::uint32_t>(k);
    cur = poly_mul_mod(cur, gp, modulus_, p_);
  }
}

std::uint64_t GaloisField::add(std::uint64_t a, std::uint64_t b) const {
  if (p_ == 2) return a ^ b;
  if (e_ == 1) {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t out = 0, scale = 1;
  for (unsigned i = 0; i < e_; ++i) {
    const std::uint64_t d = (a % p_ + b % p_) % p_;
    out += d * scale;
    scale *= p_;
    a /= p_;
    b /= p_;
  }
  return out;
}

std::uint64_t GaloisField::mul(std::uint64_t a, std::uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  std::uint64_t k = std::uint64_t{log_[a]} + log_[b];
  if (k >= q_ - 1) k -= q_ - 1;
  return exp_[k];
}

std::uint64_t GaloisField::pow(std::uint64_t a, std::uint64_t k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  return exp_[static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(log_[a]) * k % (q_ - 1))];
}

FpPoly GaloisField::to_poly(std::uint64_t a) const {
  FpPoly out(e_, 0);
  for (unsigned i = 0; i < e_; ++i) {
    out[i] = a % p_;
    a /= p_;
  }
  trim(out);
  return out;
}

std::uint64_t GaloisField::from_poly(const FpPoly& a) const {
  std::uint64_t out = 0, scale = 1;
  for (unsigned i = 0; i < e_; ++i) {
    out += (i < a.size() ? a[i] % p_ : 0) * scale;
    scale *= p_;
  }
  return out;
}

}  // namespace anisoforge::gf
