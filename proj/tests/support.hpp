#pragma once

#include <string>

#include "brillo/config.hpp"

namespace brillo::testsupport {

inline std::string data_dir() { return BRILLO_DATA_DIR; }

inline std::string data_path(const std::string& name) { return data_dir() + "/" + name; }

inline RunConfig bundled_config() { return RunConfig::load(data_path("config.cfg")); }

}  // namespace brillo::testsupport
