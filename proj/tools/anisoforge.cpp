// anisoforge: sequences, blocked forms, certificates and audits from the shell.
//
// Exit codes: 0 ok / valid, 2 a check failed, 3 a budget ran out, 1 usage or parse
// error, 4 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anisoforge/error.hpp"
#include "anisoforge/serialize.hpp"

namespace af = anisoforge;
using af::Error;
using af::ErrorKind;
using af::io::Json;

namespace {

struct Common {
  std::string out;
  std::optional<std::uint64_t> budget;
};

std::uint64_t scan_budget(const Common& c) {
  if (c.budget) return *c.budget;
  if (const char* env = std::getenv("ANISOFORGE_BUDGET"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidArgument, std::string("ANISOFORGE_BUDGET is not a positive integer: ") + env);
  }
  return af::verify::kDefaultScanBudget;
}

// write-then-rename so readers never see a half-written artifact
void emit(const Common& c, const Json& j) {
  const std::string text = af::io::dump(j);
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(c.out);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return af::io::parse(ss.str());
}

af::forms::BlockFormSpec build_spec(const std::string& kind, unsigned n,
                                    const af::forms::BuildOptions& opts) {
  return kind == "triple" ? af::forms::make_triple_spec(n, opts) : af::forms::make_pair_spec(n, opts);
}

struct BuildFlags {
  std::string kind = "pair";
  unsigned n = 1;
  std::uint64_t p = 5;
  std::optional<unsigned> precision;
  std::string ram = "1";
  unsigned max_degree = af::forms::kDefaultMaxRingDegree;

  af::forms::BuildOptions options() const {
    af::forms::BuildOptions o;
    o.p = p;
    o.precision = precision;
    if (o.ramification_index.set_str(ram, 10) != 0 || o.ramification_index < 1) {
      throw Error(ErrorKind::InvalidArgument, "--ram must be a positive integer");
    }
    o.max_ring_degree = max_degree;
    return o;
  }
};

void add_build_flags(CLI::App* cmd, BuildFlags& b, bool kind_positional) {
  if (kind_positional) {
    cmd->add_option("kind", b.kind, "pair or triple")->check(CLI::IsMember({"pair", "triple"}));
  } else {
    cmd->add_option("--kind", b.kind, "pair or triple")->check(CLI::IsMember({"pair", "triple"}));
  }
  cmd->add_option("--n", b.n, "sequence index")->check(CLI::PositiveNumber);
  cmd->add_option("--p", b.p, "residue characteristic of the base");
  cmd->add_option("--precision", b.precision, "p-adic precision N");
  cmd->add_option("--ram", b.ram, "ramification index D of the stage");
  cmd->add_option("--max-degree", b.max_degree, "cap on factor ring degrees");
}

af::forms::HomogeneousForm demo_form(const std::string& name, std::uint64_t q, unsigned n, long a) {
  auto ctx = af::padic::Context::make(q, 1);
  if (name == "demo3var") {
    // X1^2 + X1 X2 + X2^2 + X3^2
    af::forms::Polynomial poly(ctx, 3);
    poly.add_term({2, 0, 0}, 1);
    poly.add_term({1, 1, 0}, 1);
    poly.add_term({0, 2, 0}, 1);
    poly.add_term({0, 0, 2}, 1);
    poly.normalize();
    return af::forms::HomogeneousForm(std::move(poly), 2);
  }
  if (name == "nmsp") {
    auto ring = af::tower::UnramifiedRing::make(ctx, n);
    return af::forms::norm_minus_scaled_power(ring, af::padic::PadicInt(ctx, a));
  }
  return af::io::form_from_json(read_json(name));
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "not a number: " + item);
    }
  }
  return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--window must be lo:hi");
  const auto lo = parse_list(s.substr(0, colon));
  const auto hi = parse_list(s.substr(colon + 1));
  if (lo.size() != 1 || hi.size() != 1) throw Error(ErrorKind::InvalidArgument, "--window must be lo:hi");
  return {lo[0], hi[0]};
}

int run(int argc, char** argv) {
  CLI::App app{"anisoforge: zero-free forms over finite stages of a Henselian tower"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.out, "output path (default stdout)");
    cmd->add_option("--budget", common.budget, "exhaustive scan budget (points)")->check(CLI::PositiveNumber);
  };

  // seq
  auto* seq = app.add_subcommand("seq", "generate a pair or triple sequence with its plan");
  std::string seq_kind;
  unsigned seq_n = 0;
  std::uint64_t steps = af::arith::kDefaultSearchSteps;
  seq->add_option("kind", seq_kind, "pair or triple")->required()->check(CLI::IsMember({"pair", "triple"}));
  seq->add_option("--n", seq_n, "number of entries")->required()->check(CLI::PositiveNumber);
  seq->add_option("--steps", steps, "search step budget");
  add_common(seq);

  // build
  auto* build = app.add_subcommand("build", "realise entry n as a factored form artifact");
  BuildFlags bf;
  add_build_flags(build, bf, true);
  add_common(build);

  // certify
  auto* certify = app.add_subcommand("certify", "certify a factored form artifact");
  std::string cert_in;
  bool recheck = false;
  certify->add_option("artifact", cert_in, "factored form JSON (or a certificate with --check)")
      ->required()
      ->check(CLI::ExistingFile);
  certify->add_flag("--check", recheck, "revalidate an existing certificate");
  add_common(certify);

  // audit
  auto* audit = app.add_subcommand("audit", "randomized valuation audit");
  BuildFlags af_flags;
  std::string audit_form;
  af::verify::AuditOptions aopts;
  add_build_flags(audit, af_flags, false);
  audit->add_option("--form", audit_form, "factored form JSON (default: build from --kind/--n)")
      ->check(CLI::ExistingFile);
  audit->add_option("--trials", aopts.trials, "number of sampled vectors");
  audit->add_option("--seed", aopts.seed, "sampling seed");
  audit->add_option("--cap", aopts.valuation_cap, "largest sampled coordinate valuation");
  add_common(audit);

  // cw
  auto* cw = app.add_subcommand("cw", "find a nontrivial zero of a form with more variables than its degree");
  std::uint64_t q = 2;
  std::string cw_form = "demo3var";
  unsigned cw_n = 2;
  long cw_a = 1;
  cw->add_option("--q", q, "prime field order");
  cw->add_option("--form", cw_form, "demo3var, nmsp, or an expanded form JSON file");
  cw->add_option("--n", cw_n, "ring degree for nmsp")->check(CLI::PositiveNumber);
  cw->add_option("--a", cw_a, "scalar a for nmsp");
  add_common(cw);

  // goldbach
  auto* gb = app.add_subcommand("goldbach", "three-distinct-prime decompositions over a window");
  std::string exclude;
  std::string window = "31:231";
  gb->add_option("--exclude", exclude, "comma-separated excluded primes");
  gb->add_option("--window", window, "lo:hi");
  add_common(gb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const std::uint64_t budget = scan_budget(common);

  if (*seq) {
    if (seq_kind == "pair") {
      const auto s = af::arith::gen_pair_sequence(seq_n, steps);
      emit(common, af::io::sequence_json(s, af::arith::derive_plan(s), af::arith::verify_pair_congruences(s)));
      return af::arith::verify_pair_congruences(s).all_passed() ? 0 : 2;
    }
    const auto s = af::arith::gen_triple_sequence(seq_n, steps);
    const auto report = af::arith::verify_triple_sequence(s);
    emit(common, af::io::sequence_json(s, af::arith::derive_plan(s), report));
    return report.all_passed() ? 0 : 2;
  }
  if (*build) {
    emit(common, af::io::to_json(build_spec(bf.kind, bf.n, bf.options())));
    return 0;
  }
  if (*certify) {
    const Json in = read_json(cert_in);
    if (recheck) {
      const auto cert = af::io::certificate_from_json(in);
      const bool same = af::verify::check(cert, budget);
      Json out = af::io::to_json(af::verify::certify_anisotropic(cert.spec, budget));
      out["recheck_matches"] = same;
      emit(common, out);
      return same && cert.valid() ? 0 : 2;
    }
    const auto cert = af::verify::certify_anisotropic(af::io::spec_from_json(in), budget);
    emit(common, af::io::to_json(cert));
    if (auto clause = cert.failing_clause()) std::cerr << "certificate invalid: " << *clause << "\n";
    return cert.valid() ? 0 : 2;
  }
  if (*audit) {
    const auto spec = audit_form.empty() ? build_spec(af_flags.kind, af_flags.n, af_flags.options())
                                         : af::io::spec_from_json(read_json(audit_form));
    aopts.precision = af_flags.precision;
    const auto report = af::verify::random_evaluation_audit(spec, aopts);
    emit(common, af::io::to_json(report));
    return report.mismatches == 0 ? 0 : 2;
  }
  if (*cw) {
    if (!af::arith::is_prime(q)) throw Error(ErrorKind::InvalidArgument, "--q must be prime");
    const auto form = demo_form(cw_form, q, cw_n, cw_a);
    if (form.context()->p() != q) throw Error(ErrorKind::InvalidArgument, "form is not over F_q");
    const auto witness = af::verify::chevalley_warning_check(form, 1, budget);
    Json out;
    out["schema"] = af::io::kSchemaVersion;
    out["type"] = "chevalley_warning";
    out["q"] = q;
    out["form"] = cw_form;
    out["num_vars"] = form.num_vars();
    out["degree"] = form.degree();
    out["witness"] = witness;
    emit(common, out);
    return 0;
  }
  if (*gb) {
    const auto [lo, hi] = parse_window(window);
    const auto excluded = parse_list(exclude);
    const auto report = af::verify::goldbach_window_check(excluded, lo, hi, budget);
    emit(common, af::io::to_json(report));
    return report.failures.empty() ? 0 : 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "anisoforge: " << e.what() << "\n";
    return af::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "anisoforge: internal error: " << e.what() << "\n";
    return 4;
  }
}
