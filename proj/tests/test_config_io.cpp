#include "wavelab/config.hpp"

#include "wavelab/digest.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/initial_conditions.hpp"
#include "wavelab/io.hpp"
#include "wavelab/spectral.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace wavelab;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("wavelab_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}
}

TEST_CASE("key-value parsing: comments, sections, diagnostics") {
    auto kv = KeyValueFile::parse_string(
        "# a comment\n"
        "params.beta = -1.5  # trailing comment\n"
        "grid.n = 128\n"
        "\n"
        "outputs.write_snapshots = true\n",
        "test.cfg");
    CHECK(kv.get_double("params.beta", 0.0) == -1.5);
    CHECK(kv.get_int("grid.n", 0) == 128);
    CHECK(kv.get_bool("outputs.write_snapshots", false));
    CHECK_NOTHROW(kv.require_all_consumed());

    CHECK_THROWS_WITH_AS(KeyValueFile::parse_string("no equals sign\n", "t.cfg"),
                         doctest::Contains("t.cfg:1"), ConfigError);
    CHECK_THROWS_WITH_AS(KeyValueFile::parse_string("a = 1\na = 2\n", "t.cfg"),
                         doctest::Contains("duplicate"), ConfigError);

    auto bad = KeyValueFile::parse_string("grid.n = twelve\n", "t.cfg");
    CHECK_THROWS_WITH_AS(bad.get_int("grid.n", 0), doctest::Contains("grid.n"), ConfigError);

    auto unknown = KeyValueFile::parse_string("grid.m = 12\n", "t.cfg");
    CHECK_THROWS_WITH_AS(unknown.require_all_consumed(), doctest::Contains("grid.m"),
                         ConfigError);
}

TEST_CASE("run config: defaults validate and round-trip exactly") {
    auto kv = KeyValueFile::parse_string("", "empty.cfg");
    const RunConfig cfg = RunConfig::from_kv(kv);
    const std::string ser = cfg.serialize();

    auto kv2 = KeyValueFile::parse_string(ser, "roundtrip.cfg");
    const RunConfig cfg2 = RunConfig::from_kv(kv2);
    CHECK(cfg2.serialize() == ser);
    CHECK(cfg2.digest() == cfg.digest());
}

TEST_CASE("run config rejects constraint violations with named fields") {
    auto positive_beta = KeyValueFile::parse_string("params.beta = 1.0\n", "c.cfg");
    CHECK_THROWS_WITH_AS(RunConfig::from_kv(positive_beta), doctest::Contains("beta"),
                         InvalidParams);

    auto big_mubeta = KeyValueFile::parse_string("params.mu = 0.9\nparams.beta = -1.5\n", "c.cfg");
    CHECK_THROWS_AS(RunConfig::from_kv(big_mubeta), InvalidParams);

    auto one_sample = KeyValueFile::parse_string("verify.n_samples = 1\n", "c.cfg");
    CHECK_THROWS_AS(RunConfig::from_kv(one_sample), InvalidParams);

    auto odd_grid = KeyValueFile::parse_string("grid.n = 63\n", "c.cfg");
    CHECK_THROWS_AS(RunConfig::from_kv(odd_grid), InvalidParams);

    auto bad_dt = KeyValueFile::parse_string("stepper.dt = 5.0\nstepper.t_end = 1.0\n", "c.cfg");
    CHECK_THROWS_AS(RunConfig::from_kv(bad_dt), InvalidParams);
}

TEST_CASE("fmt_double survives a parse round trip") {
    for (double x : {0.0, 1.0, -1.5, M_PI, 1e-300, 6.02e23, 0.1}) {
        CHECK(std::stod(fmt_double(x)) == x);
    }
}

TEST_CASE("atomic writes leave no temp files") {
    const fs::path dir = temp_dir("atomic");
    const fs::path target = dir / "sub" / "file.txt";
    write_text_atomic(target, "hello\n");
    std::ifstream in(target);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hello");
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    fs::remove_all(dir);
}

TEST_CASE("csv writer enforces the header width") {
    CsvWriter csv({"a", "b"});
    csv.add_row({"1", "2"});
    CHECK_THROWS_AS(csv.add_row({"1"}), Error);
    CHECK(csv.str() == "a,b\n1,2\n");
}

TEST_CASE("digest is stable") {
    CHECK(hex_digest("") == "cbf29ce484222325");
    CHECK(hex_digest("wavelab") != hex_digest("wavelab2"));
}

TEST_CASE("initial conditions: sine mode, periodized profiles, file round trip") {
    const GridPtr g = make_grid(2.0 * M_PI, 128);

    const Field s = ic_sine(g, 0.3, 2);
    const Field expect = Field::sample(g, [](double x) { return 0.3 * std::sin(2.0 * x); });
    CHECK(testing::max_abs_diff(s, expect) < 1e-15);

    // Periodized profiles are smooth across the seam: spectrally resolved.
    CHECK(unresolved_energy_fraction(ic_gaussian(g, 0.1, M_PI, 0.8)) < 1e-12);
    CHECK(unresolved_energy_fraction(ic_sech2(g, 0.1, M_PI, 1.0)) < 1e-12);

    // Snapshot CSV round trip.
    const fs::path dir = temp_dir("icfile");
    const Field f = ic_gaussian(g, 0.2, 2.0, 0.9);
    std::string csv = "x,u\n";
    for (int j = 0; j < f.size(); ++j)
        csv += fmt_double(f.grid()->nodes()[j]) + "," + fmt_double(f[j]) + "\n";
    write_text_atomic(dir / "ic.csv", csv);
    const Field back = ic_from_file(g, dir / "ic.csv");
    CHECK(testing::max_abs_diff(f, back) == 0.0);

    const GridPtr g_small = make_grid(2.0 * M_PI, 64);
    CHECK_THROWS_AS(ic_from_file(g_small, dir / "ic.csv"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("random sobolev ic hits the requested norm exactly") {
    const GridPtr g = make_grid(2.0 * M_PI, 128);
    const Field u = ic_random_sobolev(g, 2.0, 0.75, 99);
    CHECK(sobolev_norm(u, 2.0) == doctest::Approx(0.75).epsilon(1e-12));
}
