#pragma once

// Command-line front end. Exit codes: 0 success, 1 internal error,
// 2 usage error, 3 validation error, 4 verification failure. stdout carries
// only JSON or CSV payloads; diagnostics go to stderr.

#include <iosfwd>
#include <string>
#include <vector>

namespace strucrep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitVerifyFailed = 4;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace strucrep
