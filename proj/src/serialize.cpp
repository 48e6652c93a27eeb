#include "anisoforge/serialize.hpp"

#include "anisoforge/error.hpp"

namespace anisoforge::io {
namespace {

using padic::Integer;

std::string str(const Integer& v) { return v.get_str(); }

Integer integer(const Json& j) {
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) {
      throw Error(ErrorKind::ParseError, "not a decimal integer: " + j.get<std::string>());
    }
    return v;
  }
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  throw Error(ErrorKind::ParseError, "expected an integer, got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

template <class T>
T number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::ParseError, std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<T>();
}

bool boolean(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_boolean()) throw Error(ErrorKind::ParseError, std::string("field \"") + key + "\" must be boolean");
  return v.get<bool>();
}

Json integers(const std::vector<Integer>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(str(v));
  return out;
}

std::vector<Integer> integers_from(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected an array of integers");
  std::vector<Integer> out;
  for (const auto& v : j) out.push_back(integer(v));
  return out;
}

void check_schema(const Json& j, const char* type) {
  if (number<int>(j, "schema") != kSchemaVersion) {
    throw Error(ErrorKind::ParseError, "unsupported schema version " + field(j, "schema").dump());
  }
  if (field(j, "type") != type) {
    throw Error(ErrorKind::ParseError, std::string("expected a ") + type + " artifact, got " +
                                           field(j, "type").dump());
  }
}

Json header(const char* type) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["type"] = type;
  return j;
}

arith::SequenceKind kind_from(const Json& j) {
  const std::string k = j.get<std::string>();
  if (k == "pair") return arith::SequenceKind::Pair;
  if (k == "triple") return arith::SequenceKind::Triple;
  throw Error(ErrorKind::ParseError, "unknown sequence kind " + k);
}

Json report_json(const arith::VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"all_passed", report.all_passed()}, {"checks", std::move(checks)}};
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace

Json to_json(const padic::PadicInt& x) {
  return {{"p", x.p()}, {"N", x.precision()}, {"value", str(x.value())}};
}

padic::PadicInt padic_from_json(const Json& j) {
  return guarded([&] {
    auto ctx = padic::Context::make(number<std::uint64_t>(j, "p"), number<unsigned>(j, "N"));
    return padic::PadicInt(std::move(ctx), integer(field(j, "value")));
  });
}

Json to_json(const tower::UnramifiedRing& ring) {
  return {{"p", ring.p()}, {"f", ring.degree()}, {"N", ring.precision()},
          {"modulus", integers(ring.modulus())}};
}

tower::RingPtr ring_from_json(const Json& j) {
  return guarded([&] {
    auto ctx = padic::Context::make(number<std::uint64_t>(j, "p"), number<unsigned>(j, "N"));
    auto modulus = integers_from(field(j, "modulus"));
    if (modulus.size() != number<unsigned>(j, "f") + 1) {
      throw Error(ErrorKind::ParseError, "modulus length does not match f");
    }
    return tower::UnramifiedRing::with_modulus(std::move(ctx), std::move(modulus));
  });
}

Json to_json(const arith::SigmaSPlan& plan) {
  return {{"provenance", std::string(arith::to_string(plan.provenance))},
          {"S", integers(plan.S)},
          {"Sigma", integers(plan.Sigma)}};
}

arith::SigmaSPlan plan_from_json(const Json& j) {
  return guarded([&] {
    arith::SigmaSPlan plan;
    plan.provenance = kind_from(field(j, "provenance"));
    plan.S = integers_from(field(j, "S"));
    plan.Sigma = integers_from(field(j, "Sigma"));
    return plan;
  });
}

Json to_json(const tower::StagePlan& stage) {
  return {{"p", stage.p}, {"F", str(stage.unramified_degree)}, {"D", str(stage.ramification_index)},
          {"plan", to_json(stage.plan)}};
}

tower::StagePlan stage_from_json(const Json& j) {
  return guarded([&] {
    tower::StagePlan stage;
    stage.p = number<std::uint64_t>(j, "p");
    stage.unramified_degree = integer(field(j, "F"));
    stage.ramification_index = integer(field(j, "D"));
    stage.plan = plan_from_json(field(j, "plan"));
    return stage;
  });
}

Json sequence_json(std::span<const arith::PairSeqEntry> seq, const arith::SigmaSPlan& plan,
                   const arith::VerificationReport& report) {
  Json j = header("sequence");
  j["kind"] = "pair";
  Json entries = Json::array();
  for (const auto& e : seq) entries.push_back({{"n", e.index}, {"k", str(e.k)}, {"p", str(e.p)}});
  j["entries"] = std::move(entries);
  j["S"] = integers(plan.S);
  j["Sigma"] = integers(plan.Sigma);
  j["verification"] = report_json(report);
  return j;
}

Json sequence_json(std::span<const arith::TripleSeqEntry> seq, const arith::SigmaSPlan& plan,
                   const arith::VerificationReport& report) {
  Json j = header("sequence");
  j["kind"] = "triple";
  Json entries = Json::array();
  for (const auto& e : seq) {
    entries.push_back({{"n", e.index},
                       {"t", str(e.t)},
                       {"theta", str(e.theta)},
                       {"y", str(e.y)},
                       {"p", str(e.p)}});
  }
  j["entries"] = std::move(entries);
  j["S"] = integers(plan.S);
  j["Sigma"] = integers(plan.Sigma);
  j["verification"] = report_json(report);
  return j;
}

Json to_json(const forms::BlockFormSpec& spec) {
  Json j = header("factored_form");
  j["kind"] = std::string(arith::to_string(spec.kind));
  j["n"] = spec.n;
  j["degree"] = spec.target_degree;
  j["blocks"] = spec.target_degree;
  j["block_width"] = spec.block_width;
  j["num_vars"] = spec.num_vars();
  Json factors = Json::array();
  for (const auto& f : spec.factors) {
    factors.push_back({{"ring", to_json(*f.ring)}, {"xi", integers(f.generator.coefficients())}});
  }
  j["factors"] = std::move(factors);
  j["pi"] = to_json(spec.pi);
  j["stage"] = to_json(spec.stage);
  return j;
}

forms::BlockFormSpec spec_from_json(const Json& j) {
  return guarded([&] {
    check_schema(j, "factored_form");
    forms::BlockFormSpec spec{kind_from(field(j, "kind")),
                              number<unsigned>(j, "n"),
                              number<unsigned>(j, "block_width"),
                              number<unsigned>(j, "blocks"),
                              {},
                              padic_from_json(field(j, "pi")),
                              stage_from_json(field(j, "stage"))};
    if (number<unsigned>(j, "degree") != spec.target_degree) {
      throw Error(ErrorKind::ParseError, "degree and blocks disagree");
    }
    for (const auto& f : field(j, "factors")) {
      auto ring = ring_from_json(field(f, "ring"));
      if (!ring->context()->same_as(*spec.context())) {
        throw Error(ErrorKind::ContextMismatch, "factor ring over a different (p, N) than pi");
      }
      tower::UExtElem xi(ring, integers_from(field(f, "xi")));
      spec.factors.push_back({std::move(ring), std::move(xi)});
    }
    return spec;
  });
}

Json to_json(const forms::HomogeneousForm& form) {
  Json j = header("expanded_form");
  j["p"] = form.context()->p();
  j["N"] = form.context()->precision();
  j["num_vars"] = form.num_vars();
  j["degree"] = form.degree();
  Json monomials = Json::array();
  for (const auto& [e, c] : form.polynomial().terms()) monomials.push_back(Json::array({e, str(c)}));
  j["monomials"] = std::move(monomials);
  return j;
}

forms::HomogeneousForm form_from_json(const Json& j) {
  return guarded([&] {
    check_schema(j, "expanded_form");
    auto ctx = padic::Context::make(number<std::uint64_t>(j, "p"), number<unsigned>(j, "N"));
    const auto nvars = number<unsigned>(j, "num_vars");
    forms::Polynomial poly(ctx, nvars);
    for (const auto& m : field(j, "monomials")) {
      if (!m.is_array() || m.size() != 2) throw Error(ErrorKind::ParseError, "monomial must be [exponents, coeff]");
      auto e = m[0].get<forms::Exponents>();
      if (e.size() != nvars) throw Error(ErrorKind::ParseError, "exponent vector has the wrong length");
      poly.add_term(std::move(e), integer(m[1]));
    }
    poly.normalize();
    return forms::HomogeneousForm(std::move(poly), number<unsigned>(j, "degree"));
  });
}

Json to_json(const verify::ScanResult& scan) {
  Json j{{"field_order", scan.field_order},
         {"num_vars", scan.num_vars},
         {"scanned", scan.scanned},
         {"zeros", scan.zeros},
         {"anisotropic", scan.anisotropic()}};
  j["first_zero"] = scan.first_zero ? Json(*scan.first_zero) : Json(nullptr);
  return j;
}

namespace {

verify::ScanResult scan_from_json(const Json& j) {
  verify::ScanResult s;
  s.field_order = number<std::uint64_t>(j, "field_order");
  s.num_vars = number<unsigned>(j, "num_vars");
  s.scanned = number<std::uint64_t>(j, "scanned");
  s.zeros = number<std::uint64_t>(j, "zeros");
  const Json& w = field(j, "first_zero");
  if (!w.is_null()) s.first_zero = w.get<std::vector<std::uint64_t>>();
  return s;
}

}  // namespace

Json to_json(const verify::AnisotropyCertificate& cert) {
  Json j = header("certificate");
  j["valid"] = cert.valid();
  const auto clause = cert.failing_clause();
  j["failing_clause"] = clause ? Json(*clause) : Json(nullptr);
  j["precision_used"] = cert.precision_used;
  j["pi_valuation_one"] = cert.pi_valuation_one;
  j["plan_check"] = cert.plan_check;
  Json checks = Json::array();
  for (const auto& fc : cert.residue_checks) {
    checks.push_back({{"degree", fc.degree},
                      {"generator_primitive", fc.generator_primitive},
                      {"variables_essential", fc.variables_essential},
                      {"scan", to_json(fc.scan)}});
  }
  j["residue_checks"] = std::move(checks);
  Json classes = Json::array();
  for (const auto& [jj, c] : cert.valuation_check.classes) classes.push_back(Json::array({jj, str(c)}));
  j["valuation_check"] = {{"distinct", cert.valuation_check.distinct}, {"classes", std::move(classes)}};
  j["spec"] = to_json(cert.spec);
  return j;
}

verify::AnisotropyCertificate certificate_from_json(const Json& j) {
  return guarded([&] {
    check_schema(j, "certificate");
    verify::AnisotropyCertificate cert{spec_from_json(field(j, "spec")), {}, {}, false, false, 0};
    cert.precision_used = number<unsigned>(j, "precision_used");
    cert.pi_valuation_one = boolean(j, "pi_valuation_one");
    cert.plan_check = boolean(j, "plan_check");
    for (const auto& c : field(j, "residue_checks")) {
      verify::FactorCheck fc;
      fc.degree = number<unsigned>(c, "degree");
      fc.generator_primitive = boolean(c, "generator_primitive");
      fc.variables_essential = boolean(c, "variables_essential");
      fc.scan = scan_from_json(field(c, "scan"));
      cert.residue_checks.push_back(std::move(fc));
    }
    const Json& vc = field(j, "valuation_check");
    cert.valuation_check.distinct = boolean(vc, "distinct");
    for (const auto& c : field(vc, "classes")) {
      cert.valuation_check.classes.emplace_back(c.at(0).get<unsigned>(), integer(c.at(1)));
    }
    return cert;
  });
}

Json to_json(const verify::AuditReport& report) {
  Json j = header("audit");
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["precision"] = report.precision;
  j["valuation_cap"] = report.valuation_cap;
  j["mismatches"] = report.mismatches;
  Json hist = Json::array();
  for (const auto& [v, count] : report.valuation_histogram) hist.push_back(Json::array({v, count}));
  j["valuation_histogram"] = std::move(hist);
  if (report.first_mismatch) {
    const auto& m = *report.first_mismatch;
    j["first_mismatch"] = {{"trial", m.trial},
                           {"vector", integers(m.vector)},
                           {"predicted", m.predicted},
                           {"actual", m.actual.to_string()}};
  } else {
    j["first_mismatch"] = nullptr;
  }
  return j;
}

Json to_json(const verify::CoprimeDegreeReport& report) {
  Json j = header("coprime_degree");
  j["extension_degree"] = report.extension_degree;
  j["invariant"] = str(report.invariant);
  j["holds"] = report.holds();
  Json scans = Json::array();
  for (const auto& s : report.factor_scans) scans.push_back(to_json(s));
  j["factor_scans"] = std::move(scans);
  return j;
}

Json to_json(const verify::GoldbachReport& report) {
  Json j = header("goldbach");
  j["excluded"] = report.excluded;
  j["window"] = Json::array({report.lo, report.hi});
  j["failures"] = report.failures;
  Json decomps = Json::array();
  for (const auto& [n, t] : report.decompositions) decomps.push_back(Json::array({n, t.p1, t.p2, t.p3}));
  j["decompositions"] = std::move(decomps);
  return j;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace anisoforge::io
