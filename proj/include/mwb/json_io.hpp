#pragma once

#include <json.hpp>

#include "mwb/genericity.hpp"

namespace mwb {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;  // sorted keys, so serialized output is deterministic

Json to_json(const Formula& f);
Json to_json(const AtomSet& s);
Json to_json(const Proof& pf);
Json to_json(const Model& m);
Json to_json(const SatisfactionReport& rep);
Json to_json(const BoundReport& rep);
Json to_json(const Verdict& v);
Json to_json(const ConsistencyResult& r);
Json to_json(const Certificate& c);
Json to_json(const Falsification& f);
Json to_json(const FalsifyOutcome& o);
Json to_json(const KnowerReport& r);
Json to_json(const ConsistencyDemo& d);
Json to_json(const SupersetDemo& d);
Json to_json(const NecessitationDemo& d);
Json to_json(const SoundnessSample& s);

// Nested {op, ...} tree, for `parse` output.
Json ast_json(const Formula& f);

// Adds the top-level schema_version field.
Json versioned(Json j);

// Inverse of to_json(Proof); formulas are parsed from their printed text.
Proof proof_from_json(const Json& j);

}  // namespace mwb
