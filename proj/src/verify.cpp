#include "anisoforge/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "anisoforge/error.hpp"

namespace anisoforge::verify {
namespace {

using padic::PadicInt;

constexpr std::uint64_t kNoIndex = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kChunk = 4096;

// Exceptions must not cross an OpenMP region boundary; keep the first and rethrow.
class Captured {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(anisoforge_capture)
      if (!ptr_) ptr_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (ptr_) std::rethrow_exception(ptr_);
  }

 private:
  std::exception_ptr ptr_;
};

void decode(std::uint64_t idx, std::uint64_t q, std::vector<std::uint64_t>& x) {
  for (auto& d : x) {
    d = idx % q;
    idx /= q;
  }
}

// odometer step, x_1 fastest
void increment(std::vector<std::uint64_t>& x, std::uint64_t q) {
  for (auto& d : x) {
    if (++d < q) return;
    d = 0;
  }
}

ScanResult finish(const ResidueKernel& kernel, ScanMode mode, std::uint64_t total,
                  std::uint64_t zeros, std::uint64_t first) {
  ScanResult r;
  r.field_order = kernel.field().order();
  r.num_vars = kernel.num_vars();
  if (first != kNoIndex) {
    std::vector<std::uint64_t> x(kernel.num_vars());
    decode(first, r.field_order, x);
    r.first_zero = std::move(x);
  }
  if (mode == ScanMode::FirstZero) {
    r.scanned = first == kNoIndex ? total - 1 : first;
    r.zeros = first == kNoIndex ? 0 : 1;
  } else {
    r.scanned = total - 1;
    r.zeros = zeros;
  }
  return r;
}

FactorCheck check_factor(const forms::NormFactor& factor, unsigned width, std::uint64_t budget) {
  FactorCheck fc;
  fc.degree = factor.ring->degree();
  fc.generator_primitive = factor.generator.is_unit() && tower::is_primitive_residue(factor.generator);

  const std::uint64_t p = factor.ring->p();
  const auto& mod = factor.ring->residue_modulus();
  const gf::FpPoly r = tower::residue(factor.generator);
  std::vector<std::vector<std::uint64_t>> rows;
  gf::FpPoly power{1};
  for (unsigned i = 0; i < width; ++i) {
    std::vector<std::uint64_t> row(fc.degree, 0);
    for (std::size_t j = 0; j < power.size() && j < row.size(); ++j) row[j] = power[j];
    rows.push_back(std::move(row));
    power = gf::poly_mul_mod(power, r, mod, p);
  }
  fc.variables_essential = width <= fc.degree && gf::rank_mod_p(std::move(rows), p) == width;

  // The residue form only needs one digit of precision.
  auto ring1 = factor.ring->at_precision(1);
  const auto form = forms::norm_form_unchecked(factor.generator.in_ring(ring1), width).residue_form();
  fc.scan = residue_anisotropy(form, 1, budget);
  return fc;
}

Integer pn_times_degrees(const forms::BlockFormSpec& spec) {
  Integer v = spec.target_degree;
  for (unsigned d : spec.factor_degrees()) v *= d;
  return v;
}

}  // namespace

ResidueKernel::ResidueKernel(const forms::HomogeneousForm& form, const gf::GaloisField& field)
    : field_(&field), num_vars_(form.num_vars()) {
  const std::uint64_t p = form.context()->p();
  if (p != field.p()) {
    throw Error(ErrorKind::ContextMismatch, "form over p = " + std::to_string(p) +
                                                " scanned over a field of characteristic " +
                                                std::to_string(field.p()));
  }
  for (const auto& [exps, coeff] : form.polynomial().terms()) {
    const auto c = mpz_fdiv_ui(coeff.get_mpz_t(), static_cast<unsigned long>(p));
    if (c == 0) continue;
    terms_.push_back({field.log(c), exps});
  }
}

std::uint64_t ResidueKernel::evaluate(std::span<const std::uint64_t> x) const {
  const std::uint64_t order = field_->order() - 1;
  std::uint64_t acc = 0;
  for (const auto& t : terms_) {
    std::uint64_t lg = t.log_coefficient;
    bool zero = false;
    for (unsigned i = 0; i < num_vars_; ++i) {
      if (t.exponents[i] == 0) continue;
      if (x[i] == 0) {
        zero = true;
        break;
      }
      lg += static_cast<std::uint64_t>(field_->log(x[i])) * t.exponents[i];
    }
    if (!zero) acc = field_->add(acc, field_->exp(lg % order));
  }
  return acc;
}

std::uint64_t scan_size(std::uint64_t q, unsigned k, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (total > budget / q) {
      throw Error(ErrorKind::BudgetExceeded, std::to_string(q) + "^" + std::to_string(k) +
                                                 " points exceed the scan budget " +
                                                 std::to_string(budget));
    }
    total *= q;
  }
  return total;
}

ScanResult scan_zeros_serial(const ResidueKernel& kernel, ScanMode mode, std::uint64_t budget) {
  const std::uint64_t q = kernel.field().order();
  const std::uint64_t total = scan_size(q, kernel.num_vars(), budget);
  std::vector<std::uint64_t> x(kernel.num_vars(), 0);
  std::uint64_t zeros = 0;
  std::uint64_t first = kNoIndex;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    increment(x, q);
    if (kernel.evaluate(x) != 0) continue;
    ++zeros;
    if (first == kNoIndex) first = idx;
    if (mode == ScanMode::FirstZero) break;
  }
  return finish(kernel, mode, total, zeros, first);
}

ScanResult scan_zeros(const ResidueKernel& kernel, ScanMode mode, std::uint64_t budget) {
  const std::uint64_t q = kernel.field().order();
  const std::uint64_t total = scan_size(q, kernel.num_vars(), budget);
  const std::int64_t chunks = static_cast<std::int64_t>((total + kChunk - 1) / kChunk);
  std::uint64_t zeros = 0;
  std::atomic<std::uint64_t> first{kNoIndex};
  const bool stop_early = mode == ScanMode::FirstZero;

#pragma omp parallel for schedule(dynamic) reduction(+ : zeros)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c) * kChunk);
    const std::uint64_t hi = std::min(total, static_cast<std::uint64_t>(c + 1) * kChunk);
    if (stop_early && lo > first.load(std::memory_order_relaxed)) continue;
    std::vector<std::uint64_t> x(kernel.num_vars());
    decode(lo, q, x);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      if (idx != lo) increment(x, q);
      if (kernel.evaluate(x) != 0) continue;
      ++zeros;
      std::uint64_t seen = first.load(std::memory_order_relaxed);
      while (idx < seen && !first.compare_exchange_weak(seen, idx)) {
      }
      if (stop_early) break;
    }
  }
  return finish(kernel, mode, total, zeros, first.load());
}

ScanResult residue_anisotropy(const forms::HomogeneousForm& form, unsigned extension_degree,
                              std::uint64_t budget) {
  if (extension_degree < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  const gf::GaloisField field(form.context()->p(), extension_degree);
  scan_size(field.order(), form.num_vars(), budget);
  const ResidueKernel kernel(form.residue_form(), field);
  return scan_zeros(kernel, ScanMode::FirstZero, budget);
}

std::vector<std::uint64_t> chevalley_warning_check(const forms::HomogeneousForm& form,
                                                   unsigned extension_degree, std::uint64_t budget) {
  if (form.num_vars() <= form.degree()) {
    throw Error(ErrorKind::PreconditionFailed,
                std::to_string(form.num_vars()) + " variables do not exceed degree " +
                    std::to_string(form.degree()));
  }
  const ScanResult r = residue_anisotropy(form, extension_degree, budget);
  if (!r.first_zero) {
    throw Error(ErrorKind::InternalError, "no nontrivial zero although n > d");
  }
  return *r.first_zero;
}

bool AnisotropyCertificate::valid() const { return !failing_clause().has_value(); }

std::optional<std::string> AnisotropyCertificate::failing_clause() const {
  if (!pi_valuation_one) return "pi_valuation";
  if (!plan_check) return "plan_check";
  if (residue_checks.size() != spec.factors.size()) return "residue_checks";
  for (std::size_t i = 0; i < residue_checks.size(); ++i) {
    const auto& fc = residue_checks[i];
    const std::string at = "[" + std::to_string(i) + "]";
    if (!fc.generator_primitive) return "generator_primitive" + at;
    if (!fc.variables_essential) return "variables_essential" + at;
    if (!fc.scan.anisotropic()) return "residue_anisotropy" + at;
  }
  if (!valuation_check.distinct) return "valuation_classes";
  return std::nullopt;
}

AnisotropyCertificate certify_anisotropic(const forms::BlockFormSpec& spec, std::uint64_t budget) {
  AnisotropyCertificate cert{spec, {}, {}, false, false, spec.context()->precision()};
  cert.pi_valuation_one = spec.pi.valuation() == padic::Valuation::exact(1);

  const Integer target = spec.target_degree;
  const Integer& d = spec.stage.ramification_index;
  cert.plan_check = target > 1 && !mpz_divisible_p(d.get_mpz_t(), target.get_mpz_t());

  for (const auto& f : spec.factors) cert.residue_checks.push_back(check_factor(f, spec.block_width, budget));

  std::set<Integer> seen;
  for (unsigned j = 1; j <= spec.target_degree; ++j) {
    Integer cls = (Integer(j) * d) % target;
    seen.insert(cls);
    cert.valuation_check.classes.emplace_back(j, std::move(cls));
  }
  cert.valuation_check.distinct = seen.size() == spec.target_degree;
  return cert;
}

void require_valid(const AnisotropyCertificate& cert) {
  if (auto clause = cert.failing_clause()) {
    throw Error(ErrorKind::CertificationFailed, "certificate fails clause " + *clause);
  }
}

bool check(const AnisotropyCertificate& cert, std::uint64_t budget) {
  const auto fresh = certify_anisotropic(cert.spec, budget);
  return fresh.residue_checks == cert.residue_checks && fresh.valuation_check == cert.valuation_check &&
         fresh.pi_valuation_one == cert.pi_valuation_one && fresh.plan_check == cert.plan_check &&
         fresh.precision_used == cert.precision_used;
}

std::optional<unsigned> predicted_valuation(unsigned target_degree, unsigned block_width,
                                            std::span<const unsigned> coordinate_valuations) {
  if (coordinate_valuations.size() != std::size_t{target_degree} * block_width) {
    throw Error(ErrorKind::ShapeMismatch, "valuation vector does not match p_n * k");
  }
  std::optional<unsigned> best;
  for (unsigned j = 0; j < target_degree; ++j) {
    unsigned m = kZeroCoordinate;
    for (unsigned i = 0; i < block_width; ++i) {
      m = std::min(m, coordinate_valuations[std::size_t{j} * block_width + i]);
    }
    if (m == kZeroCoordinate) continue;
    const unsigned v = target_degree * m + j + 1;
    if (!best || v < *best) best = v;
  }
  return best;
}

namespace {

struct TrialOutcome {
  std::vector<Integer> vector;
  unsigned predicted = 0;
  padic::Valuation actual = padic::Valuation::at_least(0);
};

// Everything a trial needs is derived from (seed, trial), so the parallel and
// serial audits see identical samples.
TrialOutcome run_trial(const forms::BlockForm& form, const AuditOptions& options, std::uint64_t trial) {
  const auto& spec = form.spec();
  const auto& ctx = spec.context();
  const std::uint64_t p = ctx->p();
  const unsigned nvars = spec.num_vars();
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::uint64_t> nonzero_digit(1, p - 1);
  std::uniform_int_distribution<unsigned> pick(0, nvars - 1);

  const unsigned forced = pick(rng);
  std::vector<unsigned> vals(nvars);
  std::vector<PadicInt> x;
  x.reserve(nvars);
  TrialOutcome out;
  Integer high;
  std::vector<std::uint64_t> words;
  for (unsigned i = 0; i < nvars; ++i) {
    unsigned m = 0;
    while (m < options.valuation_cap && coin(rng)) ++m;
    if (i == forced) m = 0;
    vals[i] = m;
    // unit = d0 + p * (random), d0 nonzero
    words.resize(ctx->precision() + 1);
    for (auto& w : words) w = rng();
    mpz_import(high.get_mpz_t(), words.size(), 1, sizeof(std::uint64_t), 0, 0, words.data());
    Integer unit = Integer(static_cast<unsigned long>(nonzero_digit(rng))) + Integer(p) * high;
    PadicInt coord = PadicInt(ctx, unit) * PadicInt::prime_power(ctx, m);
    out.vector.push_back(coord.value());
    x.push_back(std::move(coord));
  }
  out.predicted = *predicted_valuation(spec.target_degree, spec.block_width, vals);
  out.actual = form.evaluate(x).valuation();
  return out;
}

forms::BlockForm prepare_audit(const forms::BlockFormSpec& spec, const AuditOptions& options,
                               unsigned& precision) {
  precision = options.precision.value_or(spec.context()->precision());
  const unsigned need = spec.target_degree + spec.target_degree * options.valuation_cap;
  if (precision <= need) {
    throw Error(ErrorKind::PrecisionExhausted,
                "audit precision " + std::to_string(precision) + " must exceed p_n (1 + m_cap) = " +
                    std::to_string(need));
  }
  if (spec.num_vars() == 0) throw Error(ErrorKind::InvalidArgument, "form has no variables");
  if (precision == spec.context()->precision()) return forms::BlockForm(spec);
  return forms::BlockForm(forms::at_precision(spec, precision));
}

void tally(AuditReport& report, TrialOutcome&& o, std::uint64_t trial) {
  const bool match = o.actual.is_exact() && o.actual.value() == o.predicted;
  if (o.actual.is_exact()) ++report.valuation_histogram[o.actual.value()];
  if (match) return;
  ++report.mismatches;
  if (!report.first_mismatch) {
    report.first_mismatch = AuditMismatch{trial, std::move(o.vector), o.predicted, o.actual};
  }
}

AuditReport empty_report(const AuditOptions& options, unsigned precision) {
  AuditReport r;
  r.trials = options.trials;
  r.seed = options.seed;
  r.precision = precision;
  r.valuation_cap = options.valuation_cap;
  return r;
}

}  // namespace

AuditReport random_evaluation_audit_serial(const forms::BlockFormSpec& spec, const AuditOptions& options) {
  unsigned precision = 0;
  const auto form = prepare_audit(spec, options, precision);
  AuditReport report = empty_report(options, precision);
  for (std::uint64_t t = 0; t < options.trials; ++t) tally(report, run_trial(form, options, t), t);
  return report;
}

AuditReport random_evaluation_audit(const forms::BlockFormSpec& spec, const AuditOptions& options) {
  unsigned precision = 0;
  const auto form = prepare_audit(spec, options, precision);
  AuditReport report = empty_report(options, precision);
  std::vector<TrialOutcome> outcomes(options.trials);
  const auto n = static_cast<std::int64_t>(options.trials);
  Captured captured;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < n; ++t) {
    captured.run([&] { outcomes[t] = run_trial(form, options, static_cast<std::uint64_t>(t)); });
  }
  captured.rethrow();
  for (std::uint64_t t = 0; t < options.trials; ++t) tally(report, std::move(outcomes[t]), t);
  return report;
}

void require_clean(const AuditReport& report) {
  if (!report.first_mismatch) return;
  const auto& m = *report.first_mismatch;
  std::ostringstream os;
  os << report.mismatches << " audit mismatches; first at trial " << m.trial << ": predicted "
     << m.predicted << ", got " << m.actual.to_string() << ", beta = (";
  for (std::size_t i = 0; i < m.vector.size(); ++i) os << (i ? ", " : "") << m.vector[i].get_str();
  os << ")";
  throw Error(ErrorKind::AuditFailed, os.str());
}

bool CoprimeDegreeReport::holds() const {
  return std::all_of(factor_scans.begin(), factor_scans.end(),
                     [](const ScanResult& s) { return s.anisotropic(); });
}

CoprimeDegreeReport coprime_degree_check(const forms::BlockFormSpec& spec, unsigned extension_degree,
                                         std::uint64_t budget) {
  if (extension_degree < 1) throw Error(ErrorKind::InvalidArgument, "extension degree must be >= 1");
  CoprimeDegreeReport report;
  report.extension_degree = extension_degree;
  report.invariant = pn_times_degrees(spec);
  Integer g;
  const Integer e = extension_degree;
  mpz_gcd(g.get_mpz_t(), e.get_mpz_t(), report.invariant.get_mpz_t());
  if (g != 1) {
    throw Error(ErrorKind::PreconditionFailed, "extension degree " + std::to_string(extension_degree) +
                                                   " shares the factor " + g.get_str() +
                                                   " with " + report.invariant.get_str());
  }
  for (const auto& f : spec.factors) {
    auto ring1 = f.ring->at_precision(1);
    const auto form = forms::norm_form_unchecked(f.generator.in_ring(ring1), spec.block_width);
    report.factor_scans.push_back(residue_anisotropy(form, extension_degree, budget));
  }
  return report;
}

GoldbachReport goldbach_window_check(std::span<const std::uint64_t> excluded, std::uint64_t lo,
                                     std::uint64_t hi, std::uint64_t budget) {
  if (lo > hi) throw Error(ErrorKind::InvalidArgument, "empty window");
  if (hi - lo > budget) {
    throw Error(ErrorKind::BudgetExceeded, "window of " + std::to_string(hi - lo + 1) +
                                               " values exceeds the budget " + std::to_string(budget));
  }
  GoldbachReport report;
  report.excluded.assign(excluded.begin(), excluded.end());
  report.lo = lo;
  report.hi = hi;
  std::vector<std::uint64_t> odds;
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 9) | 1; n <= hi; n += 2) odds.push_back(n);

  std::vector<std::optional<arith::ThreePrimes>> found(odds.size());
  const auto count = static_cast<std::int64_t>(odds.size());
  Captured captured;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    captured.run([&] {
      try {
        found[i] = arith::three_prime_decompose(odds[i], excluded);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoDecomposition) throw;
      }
    });
  }
  captured.rethrow();
  for (std::size_t i = 0; i < odds.size(); ++i) {
    if (found[i]) {
      report.decompositions.emplace_back(odds[i], *found[i]);
    } else {
      report.failures.push_back(odds[i]);
    }
  }
  return report;
}

}  // namespace anisoforge::verify
