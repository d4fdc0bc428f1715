#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdsdp::cli {

inline constexpr int kExitKkt = 0;
inline constexpr int kExitNotCertified = 1;
inline constexpr int kExitInvalid = 2;

inline constexpr const char *kVersion = "0.1.0";

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace bdsdp::cli
