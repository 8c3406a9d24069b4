#include "wavelab/config.hpp"

#include "wavelab/digest.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/initial_conditions.hpp"
#include "wavelab/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wavelab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string ic_kind_name(IcKind k) {
    switch (k) {
        case IcKind::Gaussian: return "gaussian";
        case IcKind::Sech2: return "sech2";
        case IcKind::Sine: return "sine";
        case IcKind::RandomSobolev: return "random_sobolev";
        default: return "from_file";
    }
}

IcKind ic_kind_from(const std::string& name) {
    if (name == "gaussian") return IcKind::Gaussian;
    if (name == "sech2") return IcKind::Sech2;
    if (name == "sine") return IcKind::Sine;
    if (name == "random_sobolev") return IcKind::RandomSobolev;
    if (name == "from_file") return IcKind::FromFile;
    throw ConfigError("ic.kind must be one of gaussian|sech2|sine|random_sobolev|from_file, got '" +
                      name + "'");
}

RhsChoice rhs_from(const std::string& name) {
    if (name == "direct") return RhsChoice::direct();
    if (name == "split_as_printed") return RhsChoice::split(FluxVariant::AsPrinted);
    if (name == "split_rederived") return RhsChoice::split(FluxVariant::Rederived);
    throw ConfigError("rhs must be one of direct|split_as_printed|split_rederived, got '" + name + "'");
}

std::string method_name(StepMethod m) {
    return m == StepMethod::RK4Fixed ? "rk4" : "adaptive";
}

StepMethod method_from(const std::string& name) {
    if (name == "rk4") return StepMethod::RK4Fixed;
    if (name == "adaptive") return StepMethod::AdaptiveEmbedded;
    throw ConfigError("stepper.method must be rk4 or adaptive, got '" + name + "'");
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path.string());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (kv.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.entries_[key] = Entry{value, lineno};
    }
    return kv;
}

const KeyValueFile::Entry* KeyValueFile::find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

KeyValueFile::Entry* KeyValueFile::find(const std::string& key) {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void KeyValueFile::fail(const std::string& key, const std::string& what) const {
    const Entry* e = find(key);
    const std::string loc = e ? origin_ + ":" + std::to_string(e->line) : origin_;
    throw ConfigError(loc + ": field '" + key + "' " + what);
}

bool KeyValueFile::has(const std::string& key) const { return find(key) != nullptr; }

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
    Entry* e = find(key);
    if (!e) return fallback;
    e->consumed = true;
    return e->value;
}

double KeyValueFile::get_double(const std::string& key, double fallback) {
    Entry* e = find(key);
    if (!e) return fallback;
    e->consumed = true;
    try {
        size_t pos = 0;
        const double v = std::stod(e->value, &pos);
        if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(key, "is not a number: '" + e->value + "'");
    }
}

int KeyValueFile::get_int(const std::string& key, int fallback) {
    Entry* e = find(key);
    if (!e) return fallback;
    e->consumed = true;
    try {
        size_t pos = 0;
        const long v = std::stol(e->value, &pos);
        if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        fail(key, "is not an integer: '" + e->value + "'");
    }
}

std::uint64_t KeyValueFile::get_uint64(const std::string& key, std::uint64_t fallback) {
    Entry* e = find(key);
    if (!e) return fallback;
    e->consumed = true;
    try {
        size_t pos = 0;
        const unsigned long long v = std::stoull(e->value, &pos);
        if (pos != e->value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(key, "is not an unsigned integer: '" + e->value + "'");
    }
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) {
    Entry* e = find(key);
    if (!e) return fallback;
    e->consumed = true;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(key, "must be true or false, got '" + e->value + "'");
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key,
                                                  std::vector<double> fallback) {
    Entry* e = find(key);
    if (!e) return fallback;
    e->consumed = true;
    std::vector<double> out;
    std::istringstream ls(e->value);
    std::string item;
    while (std::getline(ls, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail(key, "has a non-numeric list entry '" + item + "'");
        }
    }
    if (out.empty()) fail(key, "is an empty list");
    return out;
}

void KeyValueFile::require_all_consumed() const {
    std::string unknown;
    for (const auto& [key, e] : entries_) {
        if (e.consumed) continue;
        if (!unknown.empty()) unknown += ", ";
        unknown += key + " (line " + std::to_string(e.line) + ")";
    }
    if (!unknown.empty())
        throw ConfigError(origin_ + ": unknown config keys: " + unknown);
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    KeyValueFile kv = KeyValueFile::parse_file(path);
    return from_kv(kv);
}

RunConfig RunConfig::from_kv(KeyValueFile& kv) {
    RunConfig c;
    c.grid_length = kv.get_double("grid.length", c.grid_length);
    c.grid_n = kv.get_int("grid.n", c.grid_n);

    c.params.epsilon = kv.get_double("params.epsilon", c.params.epsilon);
    c.params.mu = kv.get_double("params.mu", c.params.mu);
    c.params.alpha = kv.get_double("params.alpha", c.params.alpha);
    c.params.beta = kv.get_double("params.beta", c.params.beta);
    c.params.gamma = kv.get_double("params.gamma", c.params.gamma);
    c.params.delta = kv.get_double("params.delta", c.params.delta);
    c.params.iota = kv.get_double("params.iota", c.params.iota);
    c.params.kappa = kv.get_double("params.kappa", c.params.kappa);

    c.ic.kind = ic_kind_from(kv.get_string("ic.kind", ic_kind_name(c.ic.kind)));
    c.ic.amp = kv.get_double("ic.amp", c.ic.amp);
    c.ic.center = kv.get_double("ic.center", c.ic.center);
    c.ic.width = kv.get_double("ic.width", c.ic.width);
    c.ic.k = kv.get_int("ic.k", c.ic.k);
    c.ic.s = kv.get_double("ic.s", c.ic.s);
    c.ic.radius = kv.get_double("ic.radius", c.ic.radius);
    c.ic.seed = kv.get_uint64("ic.seed", c.ic.seed);
    c.ic.path = kv.get_string("ic.path", c.ic.path);

    c.stepper.method = method_from(kv.get_string("stepper.method", method_name(c.stepper.method)));
    c.stepper.dt = kv.get_double("stepper.dt", c.stepper.dt);
    c.stepper.t_end = kv.get_double("stepper.t_end", c.stepper.t_end);
    c.stepper.atol = kv.get_double("stepper.atol", c.stepper.atol);
    c.stepper.rtol = kv.get_double("stepper.rtol", c.stepper.rtol);
    c.stepper.safety = kv.get_double("stepper.safety", c.stepper.safety);
    c.stepper.dt_min = kv.get_double("stepper.dt_min", c.stepper.dt_min);
    c.stepper.cfl = kv.get_double("stepper.cfl", c.stepper.cfl);
    c.stepper.snapshot_stride = kv.get_int("stepper.snapshot_stride", c.stepper.snapshot_stride);
    c.stepper.slope_threshold = kv.get_double("stepper.slope_threshold", c.stepper.slope_threshold);

    c.rhs = rhs_from(kv.get_string("rhs", c.rhs.name()));

    c.outputs.out_dir = kv.get_string("outputs.out_dir", c.outputs.out_dir);
    c.outputs.write_snapshots = kv.get_bool("outputs.write_snapshots", c.outputs.write_snapshots);
    c.outputs.monitor_s = kv.get_double("outputs.monitor_s", c.outputs.monitor_s);

    c.verify.s = kv.get_double("verify.s", c.verify.s);
    c.verify.radius = kv.get_double("verify.radius", c.verify.radius);
    c.verify.n_samples = kv.get_int("verify.n_samples", c.verify.n_samples);
    c.verify.seed = kv.get_uint64("verify.seed", c.verify.seed);
    c.verify.spectral_decay_margin =
        kv.get_double("verify.spectral_decay_margin", c.verify.spectral_decay_margin);

    c.convergence_dts = kv.get_double_list("convergence.dts", c.convergence_dts);
    c.breaking_amps = kv.get_double_list("breaking.amps", c.breaking_amps);
    c.equivalence_fields = kv.get_int("equivalence.n_fields", c.equivalence_fields);

    kv.require_all_consumed();
    c.validate();
    return c;
}

void RunConfig::validate() const {
    // Grid invariants surface through the constructor.
    (void)Grid(grid_length, grid_n);
    params.validate();
    stepper.validate();
    verify.validate();
    if (stepper.slope_threshold != 0.0 && !(stepper.slope_threshold > 0.0))
        throw ConfigError("stepper.slope_threshold must be positive (or 0 for the automatic default)");
    if (!std::isfinite(ic.amp)) throw ConfigError("ic.amp must be finite");
    if (ic.kind == IcKind::FromFile && ic.path.empty())
        throw ConfigError("ic.kind = from_file needs ic.path");
    if (ic.kind == IcKind::RandomSobolev && !(ic.radius > 0.0))
        throw ConfigError("ic.radius must be positive");
    if ((ic.kind == IcKind::Gaussian || ic.kind == IcKind::Sech2) && !(ic.width > 0.0))
        throw ConfigError("ic.width must be positive");
    if (equivalence_fields < 1) throw ConfigError("equivalence.n_fields must be >= 1");
    if (convergence_dts.size() < 3)
        throw ConfigError("convergence.dts needs at least 3 values");
    for (double a : breaking_amps)
        if (!std::isfinite(a)) throw ConfigError("breaking.amps must be finite");
}

Field RunConfig::build_initial_condition(const GridPtr& grid) const {
    switch (ic.kind) {
        case IcKind::Gaussian: return ic_gaussian(grid, ic.amp, ic.center, ic.width);
        case IcKind::Sech2: return ic_sech2(grid, ic.amp, ic.center, ic.width);
        case IcKind::Sine: return ic_sine(grid, ic.amp, ic.k);
        case IcKind::RandomSobolev: return ic_random_sobolev(grid, ic.s, ic.radius, ic.seed);
        default: return ic_from_file(grid, ic.path);
    }
}

std::string RunConfig::serialize() const {
    std::vector<std::pair<std::string, std::string>> kv;
    const auto put = [&](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };
    const auto putd = [&](const std::string& k, double v) { put(k, fmt_double(v)); };

    putd("grid.length", grid_length);
    put("grid.n", std::to_string(grid_n));
    putd("params.epsilon", params.epsilon);
    putd("params.mu", params.mu);
    putd("params.alpha", params.alpha);
    putd("params.beta", params.beta);
    putd("params.gamma", params.gamma);
    putd("params.delta", params.delta);
    putd("params.iota", params.iota);
    putd("params.kappa", params.kappa);
    put("ic.kind", ic_kind_name(ic.kind));
    putd("ic.amp", ic.amp);
    putd("ic.center", ic.center);
    putd("ic.width", ic.width);
    put("ic.k", std::to_string(ic.k));
    putd("ic.s", ic.s);
    putd("ic.radius", ic.radius);
    put("ic.seed", std::to_string(ic.seed));
    if (!ic.path.empty()) put("ic.path", ic.path);
    put("stepper.method", method_name(stepper.method));
    putd("stepper.dt", stepper.dt);
    putd("stepper.t_end", stepper.t_end);
    putd("stepper.atol", stepper.atol);
    putd("stepper.rtol", stepper.rtol);
    putd("stepper.safety", stepper.safety);
    putd("stepper.dt_min", stepper.dt_min);
    putd("stepper.cfl", stepper.cfl);
    put("stepper.snapshot_stride", std::to_string(stepper.snapshot_stride));
    putd("stepper.slope_threshold", stepper.slope_threshold);
    put("rhs", rhs.name());
    put("outputs.out_dir", outputs.out_dir);
    put("outputs.write_snapshots", outputs.write_snapshots ? "true" : "false");
    putd("outputs.monitor_s", outputs.monitor_s);
    putd("verify.s", verify.s);
    putd("verify.radius", verify.radius);
    put("verify.n_samples", std::to_string(verify.n_samples));
    put("verify.seed", std::to_string(verify.seed));
    putd("verify.spectral_decay_margin", verify.spectral_decay_margin);
    {
        std::string list;
        for (size_t i = 0; i < convergence_dts.size(); ++i)
            list += (i ? "," : "") + fmt_double(convergence_dts[i]);
        put("convergence.dts", list);
        list.clear();
        for (size_t i = 0; i < breaking_amps.size(); ++i)
            list += (i ? "," : "") + fmt_double(breaking_amps[i]);
        put("breaking.amps", list);
    }
    put("equivalence.n_fields", std::to_string(equivalence_fields));

    std::sort(kv.begin(), kv.end());
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::digest() const { return hex_digest(serialize()); }

}
