#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace strongcat::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O and anything unexpected
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Subcommand names in help order.
const std::vector<std::string>& command_names();

/// Config keys a subcommand accepts; each one is also a --flag (underscores become dashes).
const std::vector<std::string>& command_keys(const std::string& command);

/// Runs one command line (args excludes the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strongcat::cli
