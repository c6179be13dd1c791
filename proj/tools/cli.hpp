#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace posbasis::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitSize = 2;
inline constexpr int kExitNotPositiveBasis = 3;
inline constexpr int kExitInvalidPartition = 4;
inline constexpr int kExitComposition = 5;

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Block multiset in "(D2)^2,D1" notation, largest blocks first.
std::string block_label(const std::vector<std::size_t>& dims);

/// Grid for every 2 <= n <= max_n and 3 <= s <= 2 max_n: grid[s - 3][n - 2]
/// holds block_label(dims_for(n, s)), or "-" outside n+1 <= s <= 2n.
std::vector<std::vector<std::string>> table_grid(std::size_t max_n);

/// The grid as RFC 4180 CSV with a header row "s\n,2,...,max_n".
std::string table_csv(std::size_t max_n);

}  // namespace posbasis::cli
