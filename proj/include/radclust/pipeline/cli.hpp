#pragma once

#include <iosfwd>

namespace radclust::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the radclust tool. Data goes to out or to files,
/// diagnostics to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace radclust::pipeline
