#pragma once

#include "wavelab/harness.hpp"
#include "wavelab/model.hpp"
#include "wavelab/timestep.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wavelab {

/** Flat `key = value` file with dotted sections and '#' comments. Keeps
 *  line numbers for diagnostics and tracks consumed keys so typos are
 *  reported instead of silently ignored. */
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::filesystem::path& path);
    static KeyValueFile parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key, double fallback);
    int get_int(const std::string& key, int fallback);
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback);
    bool get_bool(const std::string& key, bool fallback);
    std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback);

    // Throws ConfigError naming every key that was never consumed.
    void require_all_consumed() const;

private:
    struct Entry {
        std::string value;
        int line;
        bool consumed = false;
    };
    std::string origin_;
    std::map<std::string, Entry> entries_;

    const Entry* find(const std::string& key) const;
    Entry* find(const std::string& key);
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

enum class IcKind { Gaussian, Sech2, Sine, RandomSobolev, FromFile };

struct IcSpec {
    IcKind kind = IcKind::Gaussian;
    double amp = 0.1;
    double center = M_PI;
    double width = 1.0;
    int k = 1;                 // sine mode number
    double s = 2.0;            // random_sobolev index
    double radius = 1.0;       // random_sobolev norm
    std::uint64_t seed = 1;    // random_sobolev seed
    std::string path;          // from_file source
};

struct OutputSpec {
    std::string out_dir = "out";
    bool write_snapshots = false;
    double monitor_s = 2.0;
};

/** Everything a run needs, parsed and revalidated from one config file. */
struct RunConfig {
    double grid_length = 2.0 * M_PI;
    int grid_n = 256;
    ModelParams params;
    IcSpec ic;
    StepperConfig stepper;
    RhsChoice rhs = RhsChoice::direct();
    OutputSpec outputs;

    SampleSpec verify;                       // verify-lemmas sampling
    std::vector<double> convergence_dts = {1e-2, 5e-3, 2.5e-3};
    std::vector<double> breaking_amps = {0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
    int equivalence_fields = 20;

    static RunConfig load(const std::filesystem::path& path);
    static RunConfig from_kv(KeyValueFile& kv);

    // Throws ConfigError / InvalidParams naming the violated constraint.
    void validate() const;

    // Canonical serialization: every effective key, sorted, full
    // precision. Re-parsing it reproduces the validated config; its
    // digest identifies the run.
    std::string serialize() const;
    std::string digest() const;

    Field build_initial_condition(const GridPtr& grid) const;
    GridPtr build_grid() const { return make_grid(grid_length, grid_n); }
};

}
