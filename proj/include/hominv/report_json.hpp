#pragma once

#include "hominv/degree.hpp"
#include "hominv/hypotheses.hpp"
#include "hominv/inverter.hpp"

#include <json.hpp>

namespace hominv {

nlohmann::json vector_json(const Vector& v);

void to_json(nlohmann::json& j, const Bracket& b);
void to_json(nlohmann::json& j, const HypothesisReport& r);
void to_json(nlohmann::json& j, const Waypoint& w);
/// Waypoints are emitted only when present (the trace flag was set).
void to_json(nlohmann::json& j, const InversionResult& r);
void to_json(nlohmann::json& j, const Preimage& p);
void to_json(nlohmann::json& j, const DegreeReport& d);
void to_json(nlohmann::json& j, const InjectivityVerdict& v);

} // namespace hominv
