#pragma once

// JSON artifacts. Arbitrary-size integers are written as decimal strings; small
// counts and indices stay JSON numbers. Key order is fixed, so equal inputs give
// byte-identical output.

#include <string>

#include <json.hpp>

#include "anisoforge/arith.hpp"
#include "anisoforge/forms.hpp"
#include "anisoforge/verify.hpp"

namespace anisoforge::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const padic::PadicInt& x);
padic::PadicInt padic_from_json(const Json& j);

Json to_json(const tower::UnramifiedRing& ring);
tower::RingPtr ring_from_json(const Json& j);

Json to_json(const arith::SigmaSPlan& plan);
arith::SigmaSPlan plan_from_json(const Json& j);

Json to_json(const tower::StagePlan& stage);
tower::StagePlan stage_from_json(const Json& j);

Json sequence_json(std::span<const arith::PairSeqEntry> seq, const arith::SigmaSPlan& plan,
                   const arith::VerificationReport& report);
Json sequence_json(std::span<const arith::TripleSeqEntry> seq, const arith::SigmaSPlan& plan,
                   const arith::VerificationReport& report);

/// Factored form artifact: rings, generators, pi, blocks and stage.
Json to_json(const forms::BlockFormSpec& spec);
/// Rebuilds the BlockFormSpec without re-validating it, so a tampered artifact still loads and
/// certification reports the failing clause. Moduli must be monic and irreducible.
forms::BlockFormSpec spec_from_json(const Json& j);

/// Expanded form {"monomials": [[exponents, coefficient], ...]}.
Json to_json(const forms::HomogeneousForm& form);
forms::HomogeneousForm form_from_json(const Json& j);

Json to_json(const verify::ScanResult& scan);
Json to_json(const verify::AnisotropyCertificate& cert);
verify::AnisotropyCertificate certificate_from_json(const Json& j);

Json to_json(const verify::AuditReport& report);
Json to_json(const verify::CoprimeDegreeReport& report);
Json to_json(const verify::GoldbachReport& report);

/// Parses text, mapping malformed input to ParseError.
Json parse(const std::string& text);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace anisoforge::io
