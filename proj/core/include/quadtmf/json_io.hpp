#pragma once

// JSON payloads. Big integers and rationals travel as decimal strings so that
// every value survives a round trip bit-exactly.

#include <json.hpp>

#include <string>

#include "quadtmf/bilform.hpp"
#include "quadtmf/discform.hpp"
#include "quadtmf/kirby.hpp"
#include "quadtmf/qseries.hpp"
#include "quadtmf/theta.hpp"
#include "quadtmf/tmf_coeff.hpp"
#include "quadtmf/tmf_module.hpp"

namespace quadtmf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Accepts a decimal string or a JSON integer. Throws ParseError.
BigInt bigint_from_json(const Json& j);
Json to_json(const BigInt& v);
/// "p/q", "p", or a JSON integer. Throws ParseError.
Rational rational_from_json(const Json& j);
Json to_json(const Rational& v);

IntMatrix int_matrix_from_json(const Json& j);
Json to_json(const IntMatrix& m);
RatMatrix rat_matrix_from_json(const Json& j);
Json to_json(const RatMatrix& m);

/// {"gram": [[...]], "label": "..."}; a bare array is read as a Gram matrix.
BilinearForm form_from_json(const Json& j);
Json to_json(const BilinearForm& b);

SignatureRecord signature_from_json(const Json& j);
Json to_json(const SignatureRecord& s);

TorsionLinkingForm torsion_from_json(const Json& j);
Json to_json(const TorsionLinkingForm& t);
DiscriminantData discriminant_from_json(const Json& j);
Json to_json(const DiscriminantData& d);

Json to_json(const Decision& d);
Decision decision_from_json(const Json& j);

/// {"framings": [...], "linking": [[...]]}; a "gram" key is also accepted.
FramedLink link_from_json(const Json& j);
Json to_json(const FramedLink& l);

/// Component indices are 1-based in JSON. Accepts {"type": "slide", "target", "over", "sign"}
/// and the compact script form {"slide": [t, o, s]}, {"blowup": 1}, {"blowdown": k}.
KirbyMove move_from_json(const Json& j);
Json to_json(const KirbyMove& m);

TmfElement element_from_json(const Json& j, const TmfCoeffTable& table);
Json to_json(const TmfElement& e);

Json to_json(const NormalForm& m);
TmfModuleExpr module_from_json(const Json& j);
Json to_json(const TmfModuleExpr& m);

TmfMap map_from_json(const Json& j, const TmfCoeffTable& table);
Json to_json(const TmfMap& f);

QSeries series_from_json(const Json& j);
Json to_json(const QSeries& s);
Json to_json(const EdgeImage& e);

}  // namespace quadtmf
