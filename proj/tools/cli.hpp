#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ramsey::cli {

inline constexpr int exit_ok = 0;
/// Check failed, UNSAT, or nothing found.
inline constexpr int exit_negative = 1;
/// Usage or I/O error.
inline constexpr int exit_usage = 2;

/// Fact store used when neither --store nor this variable is given.
inline constexpr const char * store_env = "RAMSEY_LEDGER";
inline constexpr const char * default_store = "ledger.jsonl";

/// Runs one invocation; `args` excludes the program name.
auto dispatch(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;

}
