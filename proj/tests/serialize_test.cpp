#include "anisoforge/serialize.hpp"

#include <gtest/gtest.h>

#include "anisoforge/error.hpp"

namespace anisoforge::io {
namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

TEST(Json, PadicRoundTrip) {
  const padic::PadicInt x(padic::Context::make(5, 30), padic::Integer("931322574615478515624"));
  const Json j = to_json(x);
  EXPECT_EQ(j["p"], 5);
  EXPECT_EQ(j["N"], 30);
  EXPECT_TRUE(j["value"].is_string());
  EXPECT_EQ(padic_from_json(j), x);
}

TEST(Json, RingRoundTripAndValidation) {
  auto ring = tower::UnramifiedRing::make(padic::Context::make(3, 7), 4);
  const Json j = to_json(*ring);
  EXPECT_EQ(j["f"], 4);
  EXPECT_TRUE(ring_from_json(j)->same_as(*ring));
  Json reducible = j;
  reducible["modulus"] = Json::array({"0", "0", "0", "0", "1"});
  EXPECT_EQ(kind_of([&] { ring_from_json(reducible); }), ErrorKind::InvalidArgument);
  Json short_mod = j;
  short_mod["modulus"] = Json::array({"1", "1"});
  EXPECT_EQ(kind_of([&] { ring_from_json(short_mod); }), ErrorKind::ParseError);
}

TEST(Json, SequenceShape) {
  const auto seq = arith::gen_pair_sequence(2);
  const Json j = sequence_json(seq, arith::derive_plan(seq), arith::verify_pair_congruences(seq));
  EXPECT_EQ(j["kind"], "pair");
  EXPECT_EQ(j["entries"][1]["k"], "76");
  EXPECT_EQ(j["entries"][1]["p"], "1217");
  EXPECT_EQ(j["Sigma"], Json::array({"5", "1217"}));
  EXPECT_TRUE(j["verification"]["all_passed"].get<bool>());
}

TEST(Json, FactoredFormRoundTrip) {
  const auto spec = forms::make_triple_spec(1);
  const Json j = to_json(spec);
  EXPECT_EQ(j["blocks"], 19);
  EXPECT_EQ(j["num_vars"], 57);
  EXPECT_EQ(j["factors"].size(), 3u);
  const auto back = spec_from_json(parse(dump(j)));
  EXPECT_EQ(dump(to_json(back)), dump(j));
  EXPECT_EQ(back.pi, spec.pi);
  EXPECT_EQ(back.stage.plan.Sigma, spec.stage.plan.Sigma);
}

TEST(Json, ExpandedFormRoundTrip) {
  const auto g = forms::build_g(forms::make_pair_spec(1));
  const Json j = to_json(g);
  EXPECT_EQ(j["type"], "expanded_form");
  const auto back = form_from_json(parse(dump(j)));
  EXPECT_EQ(back, g);
}

TEST(Json, CertificateRoundTripMatchesInMemory) {
  const auto spec = forms::make_pair_spec(1);
  const auto mem = verify::certify_anisotropic(spec);
  const auto loaded = spec_from_json(parse(dump(to_json(spec))));
  const auto via_disk = verify::certify_anisotropic(loaded);
  EXPECT_EQ(dump(to_json(mem)), dump(to_json(via_disk)));
  const auto cert = certificate_from_json(parse(dump(to_json(mem))));
  EXPECT_TRUE(cert.valid());
  EXPECT_TRUE(verify::check(cert));
  EXPECT_EQ(cert.residue_checks, mem.residue_checks);
}

TEST(Json, TamperedArtifactLoadsButFails) {
  Json j = to_json(forms::make_pair_spec(1));
  j["factors"][0]["xi"] = Json::array({"1", "0"});
  const auto cert = verify::certify_anisotropic(spec_from_json(j));
  EXPECT_FALSE(cert.valid());
}

TEST(Json, MalformedInput) {
  EXPECT_EQ(kind_of([] { parse("{not json"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { spec_from_json(Json::object()); }), ErrorKind::ParseError);
  Json j = to_json(forms::make_pair_spec(1));
  j["schema"] = 2;
  EXPECT_EQ(kind_of([&] { spec_from_json(j); }), ErrorKind::ParseError);
  j["schema"] = 1;
  j["pi"]["value"] = "12x";
  EXPECT_EQ(kind_of([&] { spec_from_json(j); }), ErrorKind::ParseError);
}

TEST(Json, ReportsAreDeterministic) {
  const auto spec = forms::make_pair_spec(1);
  verify::AuditOptions o;
  o.trials = 300;
  o.seed = 5;
  EXPECT_EQ(dump(to_json(verify::random_evaluation_audit(spec, o))),
            dump(to_json(verify::random_evaluation_audit(spec, o))));
  const std::vector<std::uint64_t> ex{2, 3, 5};
  const Json g = to_json(verify::goldbach_window_check(ex, 31, 61));
  EXPECT_EQ(g["failures"], Json::array({33, 45}));
  EXPECT_EQ(g["decompositions"][0], Json::array({31, 7, 11, 13}));
}

}  // namespace
}  // namespace anisoforge::io
