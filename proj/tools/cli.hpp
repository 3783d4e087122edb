#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace crn::cli {

inline constexpr const char* version = "0.3.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Runs one subcommand; args excludes the program name. Returns 0 on success or PASS, 1 on a
/// FAIL or inapplicable verdict, 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crn::cli
