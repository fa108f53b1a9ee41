#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coarse::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitWitness = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCertificate = 3;

// Runs one command line (without the program name). Files named by `-o` and
// similar flags are written to disk; when no output path is given the primary
// output goes to `out`. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

const char* version();

}  // namespace coarse::cli
