#pragma once

// Certificates of zero-freeness for the blocked forms, randomized evaluation audits,
// and finite-field oracles (Chevalley-Warning, coprime-degree transfer, three-prime
// windows).
//
// The exhaustive scans and the audit come in two flavours: an OpenMP kernel and a
// plain serial loop kept as the reference the kernel is tested against.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anisoforge/arith.hpp"
#include "anisoforge/forms.hpp"
#include "anisoforge/gf.hpp"

namespace anisoforge::verify {

using arith::Integer;

inline constexpr std::uint64_t kDefaultScanBudget = 10'000'000;

/// A form with F_p coefficients compiled for evaluation over F_q, q = p^e.
class ResidueKernel {
 public:
  ResidueKernel(const forms::HomogeneousForm& form, const gf::GaloisField& field);

  unsigned num_vars() const { return num_vars_; }
  const gf::GaloisField& field() const { return *field_; }
  std::uint64_t evaluate(std::span<const std::uint64_t> x) const;

 private:
  struct Term {
    std::uint32_t log_coefficient;
    std::vector<std::uint32_t> exponents;
  };
  const gf::GaloisField* field_;
  unsigned num_vars_;
  std::vector<Term> terms_;
};

struct ScanResult {
  std::uint64_t field_order = 0;
  unsigned num_vars = 0;
  std::uint64_t scanned = 0;  // nonzero vectors examined
  std::uint64_t zeros = 0;    // nontrivial zeros among them
  std::optional<std::vector<std::uint64_t>> first_zero;  // least in enumeration order

  bool anisotropic() const { return zeros == 0; }
  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

enum class ScanMode { CountAll, FirstZero };

/// q^k, or BudgetExceeded when it exceeds `budget`.
std::uint64_t scan_size(std::uint64_t q, unsigned k, std::uint64_t budget);

/// Enumerates the nonzero vectors of F_q^k in the order of their base-q index
/// (x_1 least significant). FirstZero mode stops at the first zero it finds; there
/// `scanned` is the number of vectors up to and including it and `zeros` is 0 or 1,
/// so both variants agree exactly.
ScanResult scan_zeros(const ResidueKernel& kernel, ScanMode mode, std::uint64_t budget);
ScanResult scan_zeros_serial(const ResidueKernel& kernel, ScanMode mode, std::uint64_t budget);

/// Exhaustive check that a form with F_p coefficients has no nontrivial zero over
/// F_{p^e}. BudgetExceeded when (p^e)^k exceeds the budget.
ScanResult residue_anisotropy(const forms::HomogeneousForm& form, unsigned extension_degree = 1,
                              std::uint64_t budget = kDefaultScanBudget);

/// A nontrivial zero of a form in more variables than its degree over F_{p^e}.
/// PreconditionFailed unless num_vars > degree; InternalError if none is found.
std::vector<std::uint64_t> chevalley_warning_check(const forms::HomogeneousForm& form,
                                                   unsigned extension_degree = 1,
                                                   std::uint64_t budget = kDefaultScanBudget);

struct FactorCheck {
  unsigned degree = 0;
  bool generator_primitive = false;
  bool variables_essential = false;  // 1, xi, ..., xi^(k-1) independent mod p
  ScanResult scan;

  bool passed() const { return generator_primitive && variables_essential && scan.anisotropic(); }
  friend bool operator==(const FactorCheck&, const FactorCheck&) = default;
};

struct ValuationCheck {
  std::vector<std::pair<unsigned, Integer>> classes;  // (j, j * D mod p_n)
  bool distinct = false;
  friend bool operator==(const ValuationCheck&, const ValuationCheck&) = default;
};

struct AnisotropyCertificate {
  forms::BlockFormSpec spec;
  std::vector<FactorCheck> residue_checks;
  ValuationCheck valuation_check;
  bool pi_valuation_one = false;
  bool plan_check = false;  // p_n does not divide D
  unsigned precision_used = 0;

  bool valid() const;
  /// Name of the first failing clause, if any.
  std::optional<std::string> failing_clause() const;
};

/// Runs every check and assembles the certificate; an invalid certificate is
/// returned, not thrown. BudgetExceeded when a residue scan is oversized.
AnisotropyCertificate certify_anisotropic(const forms::BlockFormSpec& spec,
                                          std::uint64_t budget = kDefaultScanBudget);

/// Throws CertificationFailed naming the failing clause.
void require_valid(const AnisotropyCertificate& cert);

/// Recomputes the certificate from its own spec and compares every field.
bool check(const AnisotropyCertificate& cert, std::uint64_t budget = kDefaultScanBudget);

/// Marks a zero coordinate in predicted_valuation.
inline constexpr unsigned kZeroCoordinate = ~0u;

/// min_j (p_n * m_j + j) over blocks, j 1-based, m_j the least coordinate
/// valuation in block j; nullopt when every block is zero.
std::optional<unsigned> predicted_valuation(unsigned target_degree, unsigned block_width,
                                            std::span<const unsigned> coordinate_valuations);

struct AuditOptions {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  unsigned valuation_cap = forms::kDefaultValuationCap;
  std::optional<unsigned> precision;
};

struct AuditMismatch {
  std::uint64_t trial = 0;
  std::vector<Integer> vector;
  unsigned predicted = 0;
  padic::Valuation actual = padic::Valuation::at_least(0);
};

struct AuditReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned precision = 0;
  unsigned valuation_cap = 0;
  std::uint64_t mismatches = 0;
  std::map<unsigned, std::uint64_t> valuation_histogram;
  std::optional<AuditMismatch> first_mismatch;
};

/// Samples primitive vectors (coordinates p^m * unit, m geometric(1/2) capped, one
/// coordinate forced to a unit) and compares v(f(beta)) with the prediction.
/// PrecisionExhausted unless N > p_n + p_n * m_cap.
AuditReport random_evaluation_audit(const forms::BlockFormSpec& spec, const AuditOptions& options);
AuditReport random_evaluation_audit_serial(const forms::BlockFormSpec& spec,
                                           const AuditOptions& options);

/// Throws AuditFailed carrying the first mismatching vector.
void require_clean(const AuditReport& report);

struct CoprimeDegreeReport {
  unsigned extension_degree = 0;
  Integer invariant;  // p_n times the factor degrees
  std::vector<ScanResult> factor_scans;
  bool holds() const;
};

/// Residue anisotropy of each norm factor over F_{p^e}, for e prime to the
/// invariant. PreconditionFailed on the gcd, BudgetExceeded on oversized scans.
CoprimeDegreeReport coprime_degree_check(const forms::BlockFormSpec& spec, unsigned extension_degree,
                                         std::uint64_t budget = kDefaultScanBudget);

struct GoldbachReport {
  std::vector<std::uint64_t> excluded;
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::pair<std::uint64_t, arith::ThreePrimes>> decompositions;
  std::vector<std::uint64_t> failures;
};

/// Attempts three_prime_decompose on every odd N in [lo, hi].
GoldbachReport goldbach_window_check(std::span<const std::uint64_t> excluded, std::uint64_t lo,
                                     std::uint64_t hi, std::uint64_t budget = kDefaultScanBudget);

}  // namespace anisoforge::verify
