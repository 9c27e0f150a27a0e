#pragma once

#include <json.hpp>

#include "mobons/gp.hpp"

namespace mobons {

nlohmann::json gp_to_json(const PosteriorGP& gp);
PosteriorGP gp_from_json(const nlohmann::json& j);

}  // namespace mobons
