#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fiberfuse/fusion.hpp"
#include "fiberfuse/image.hpp"

namespace fiberfuse {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitDataMismatch = 3 };

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed 12-entry palette indexed by id modulo 12.
Rgb instance_color(int id);

/// Alpha-blends each instance's color over `base` (gray bases are expanded to
/// RGB). Later sets and later instances paint over earlier ones.
Image render_overlay(const Image& base, const std::vector<InstanceSet>& sets, double alpha);

/// Entry point of the `fiberfuse` tool; args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace fiberfuse
