#pragma once

#include <string>

#include "json.hpp"
#include "sweepcert/surface.hpp"

namespace sweepcert {

nlohmann::json surface_to_json(const ConformalSurface& s);
ConformalSurface surface_from_json(const nlohmann::json& j);

void save_surface(const ConformalSurface& s, const std::string& path);
ConformalSurface load_surface(const std::string& path);

} // namespace sweepcert
