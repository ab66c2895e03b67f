#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mill/engine.hpp"

namespace mill::cli {

enum class Format { text, structured };

struct CliOptions {
    std::string kb_path;
    std::optional<std::string> query;
    std::optional<std::string> query_path;
    EngineConfig engine;
    Format format = Format::text;
    bool trace = true;
};

inline constexpr int exit_found = 0;
inline constexpr int exit_nothing_found = 1;
inline constexpr int exit_usage = 2;

/// Loads the KB, solves, and writes the report to `out`. Diagnostics go to
/// `err`. Returns 0 with solutions, 1 with none, 2 on input or config errors.
int run(const CliOptions& options, std::ostream& out, std::ostream& err);

/// Parses command-line flags and calls run().
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mill::cli
