#pragma once

#include <string>

#include "crn/network.hpp"

inline std::string network_path(const std::string& name) { return std::string(CRN_NETWORK_DIR) + "/" + name; }

inline crn::ReactionNetwork bundled(const std::string& name) { return crn::load_network(network_path(name)); }
