#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "eoclab/conditions.hpp"
#include "eoclab/eoc.hpp"
#include "eoclab/meanfield.hpp"

namespace eoclab {

// JSON conventions: infinities serialize as null (documented in the schemas),
// everything else as plain numbers. nlohmann round-trips doubles losslessly.

std::string to_string(EocStatus s);
std::string to_string(FixedPointStatus s);

nlohmann::json to_json(const EocPoint& p);
nlohmann::json to_json(const DepthScales& d);
nlohmann::json to_json(const FixedPointResult& r, double x0);
nlohmann::json to_json(const ConditionReport& r);

// 17 significant digits, locale-independent (CSV cells).
std::string fmt17(double v);

}  // namespace eoclab
