#pragma once

#include "wavelab/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavelab::cli {

// Documented exit codes; anything else is a bug.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBreaking = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitVerification = 5;

struct CliOptions {
    std::optional<std::string> out_dir;      // --out, wins over WAVELAB_OUT and config
    std::optional<std::uint64_t> seed;       // --seed, overrides verify/ic seeds
    bool quiet = false;
};

// Resolution order: --out flag, WAVELAB_OUT env var, config outputs.out_dir.
std::filesystem::path resolve_out_dir(const RunConfig& cfg, const CliOptions& opts);

int cmd_solve(const RunConfig& cfg, const CliOptions& opts);
int cmd_verify_lemmas(const RunConfig& cfg, const CliOptions& opts);
int cmd_convergence(const RunConfig& cfg, const CliOptions& opts);
int cmd_equivalence(const RunConfig& cfg, const CliOptions& opts);
int cmd_breaking_search(const RunConfig& cfg, const CliOptions& opts);

// Loads the config and dispatches; maps config failures to exit 2 with a
// line/field diagnostic on stderr.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CliOptions& opts);

// The labeled test fields the equivalence command evaluates: constants,
// single modes, mode mixtures, periodized profiles and band-limited random
// fields, all resolved well below the dealias cutoff.
std::vector<std::pair<std::string, Field>> equivalence_battery(const GridPtr& grid, int n_fields);

}
