#pragma once

#include <iosfwd>

namespace hessgeo {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the hessgeo command line:
///   analyze <file> [--samples N] [--seed S] [--json PATH]
///   verify-paper [--tolerance-scale T] [--json PATH] [--criterion N]
///   cheng-yau --cone {orthant|lorentz} [--window a,b,c,d] [--resolution M] [--csv PATH]
///   flatness <file> [--expect flat|curved]
///   legendre <file>
///   warp --base <file> --warp-expr <expr> --inverse-expr <expr>
/// Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hessgeo
