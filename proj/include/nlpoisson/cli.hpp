#pragma once

#include <filesystem>
#include <ostream>

#include "nlpoisson/config.hpp"

namespace nlpoisson {

/// Executes `command` with the given configuration, writing artifacts into
/// `out_dir` (created if missing) and a human-readable summary to `log`.
///
/// Returns 0 when every internal invariant check passed and 1 otherwise; each
/// failed check is reported as an `ERROR invariant ...` line on `err`. Hard
/// failures propagate as Error.
int run(const RunConfig& config, Command command, const std::filesystem::path& out_dir, std::ostream& log,
        std::ostream& err);

}  // namespace nlpoisson
