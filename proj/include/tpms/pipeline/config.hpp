#ifndef TPMS_PIPELINE_CONFIG_HPP
#define TPMS_PIPELINE_CONFIG_HPP

// Run configuration: a `key = value` text file, `#` starts a comment. Every
// key has a default, so an empty file is the desk-scale profile.

#include "tpms/io.hpp"
#include "tpms/porosity.hpp"
#include "tpms/regress.hpp"
#include "tpms/surface_field.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tpms::pipeline {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ShapeFactorMode { Fixture, Seeded };
enum class Filtration { Alpha, Rips };
enum class InfiniteBars { Drop, Clamp };

struct RunConfig {
    std::vector<Family> families{Family::SchwarzP, Family::Gyroid};
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    Box domain{};
    ShapeFactorMode shape_factors = ShapeFactorMode::Fixture;
    std::size_t shape_count = 20;
    Dims grid{64, 64, 64};
    std::size_t points = 1500;
    SolidSide solid_side = SolidSide::Negative;
    Filtration filtration = Filtration::Alpha;
    double rips_max_radius = 0.0; // 0: enclosing radius of each cloud
    int rips_max_dim = 2;
    int entropy_dim = 1;
    InfiniteBars infinite_bars = InfiniteBars::Drop;
    std::vector<ModelKind> models{ModelKind::Polynomial, ModelKind::ExpOfPolynomial};
    int min_degree = 1;
    int max_degree = 8;
    int n_splits = 4;
    std::uint64_t seed = 0x5eed;

    // Where and how fast; excluded from the config hash.
    std::filesystem::path out = "tpms_out";
    std::filesystem::path dataset; // empty: <out>/dataset.csv
    unsigned jobs = 1;
    bool quiet = false;

    std::filesystem::path dataset_path() const { return dataset.empty() ? out / "dataset.csv" : dataset; }
};

inline std::string_view to_string(ShapeFactorMode m) { return m == ShapeFactorMode::Fixture ? "fixture" : "seeded"; }
inline std::string_view to_string(Filtration f) { return f == Filtration::Alpha ? "alpha" : "rips"; }
inline std::string_view to_string(InfiniteBars p) { return p == InfiniteBars::Drop ? "drop" : "clamp"; }
inline std::string_view to_string(SolidSide s) { return s == SolidSide::Negative ? "negative" : "positive"; }

namespace detail {

template <typename T>
T pick(std::string_view key, std::string_view value, std::initializer_list<std::pair<std::string_view, T>> options)
{
    for (const auto& [name, v] : options)
        if (value == name)
            return v;
    std::string names;
    for (const auto& [name, v] : options)
        names += (names.empty() ? "" : ", ") + std::string(name);
    throw ConfigError(std::string(key) + ": expected one of " + names + ", got '" + std::string(value) + "'");
}

inline std::vector<std::string_view> list(std::string_view value)
{
    std::vector<std::string_view> out;
    for (auto item : split(value, ','))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

inline Vec3 triple(std::string_view key, std::string_view value)
{
    const auto items = list(value);
    if (items.size() != 1 && items.size() != 3)
        throw ConfigError(std::string(key) + ": expected one value or three comma-separated values");
    const double x = parse_finite(items[0]);
    if (items.size() == 1)
        return {x, x, x};
    return {x, parse_finite(items[1]), parse_finite(items[2])};
}

inline std::string triple_text(Vec3 v)
{
    if (v.x == v.y && v.y == v.z)
        return format_double(v.x);
    return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

} // namespace detail

/// Applies one key; throws ConfigError on an unknown key or a bad value.
inline void set_option(RunConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    const std::string k(key);
    try {
        if (k == "families") {
            cfg.families.clear();
            for (auto item : detail::list(value))
                cfg.families.push_back(parse_family(item));
        } else if (k == "a") {
            cfg.a = parse_finite(value);
        } else if (k == "b") {
            cfg.b = parse_finite(value);
        } else if (k == "c") {
            cfg.c = parse_finite(value);
        } else if (k == "domain_min") {
            cfg.domain.lo = detail::triple(key, value);
        } else if (k == "domain_max") {
            cfg.domain.hi = detail::triple(key, value);
        } else if (k == "shape_factors") {
            cfg.shape_factors = detail::pick<ShapeFactorMode>(
                key, value, {{"fixture", ShapeFactorMode::Fixture}, {"seeded", ShapeFactorMode::Seeded}});
        } else if (k == "shape_count") {
            cfg.shape_count = parse_unsigned(value);
        } else if (k == "grid") {
            const auto items = detail::list(value);
            if (items.size() != 1 && items.size() != 3)
                throw ConfigError("grid: expected n or nx,ny,nz");
            const auto n = [&](std::size_t i) { return static_cast<std::size_t>(parse_unsigned(items[i])); };
            cfg.grid = items.size() == 1 ? Dims{n(0), n(0), n(0)} : Dims{n(0), n(1), n(2)};
        } else if (k == "points") {
            cfg.points = parse_unsigned(value);
        } else if (k == "solid_side") {
            cfg.solid_side =
                detail::pick<SolidSide>(key, value, {{"negative", SolidSide::Negative}, {"positive", SolidSide::Positive}});
        } else if (k == "filtration") {
            cfg.filtration =
                detail::pick<Filtration>(key, value, {{"alpha", Filtration::Alpha}, {"rips", Filtration::Rips}});
        } else if (k == "rips_max_radius") {
            cfg.rips_max_radius = parse_finite(value);
        } else if (k == "rips_max_dim") {
            cfg.rips_max_dim = static_cast<int>(parse_unsigned(value));
        } else if (k == "entropy_dim") {
            cfg.entropy_dim = static_cast<int>(parse_unsigned(value));
        } else if (k == "infinite_bars") {
            cfg.infinite_bars =
                detail::pick<InfiniteBars>(key, value, {{"drop", InfiniteBars::Drop}, {"clamp", InfiniteBars::Clamp}});
        } else if (k == "models") {
            cfg.models.clear();
            for (auto item : detail::list(value))
                cfg.models.push_back(detail::pick<ModelKind>(
                    key, item, {{"polynomial", ModelKind::Polynomial}, {"exponential", ModelKind::ExpOfPolynomial}}));
        } else if (k == "min_degree") {
            cfg.min_degree = static_cast<int>(parse_unsigned(value));
        } else if (k == "max_degree") {
            cfg.max_degree = static_cast<int>(parse_unsigned(value));
        } else if (k == "n_splits") {
            cfg.n_splits = static_cast<int>(parse_unsigned(value));
        } else if (k == "seed") {
            cfg.seed = parse_unsigned(value);
        } else if (k == "out") {
            cfg.out = std::string(value);
        } else if (k == "dataset") {
            cfg.dataset = std::string(value);
        } else if (k == "jobs") {
            cfg.jobs = static_cast<unsigned>(parse_unsigned(value));
        } else {
            throw ConfigError("unknown config key '" + k + "'");
        }
    } catch (const ParseError& e) {
        throw ConfigError(k + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(k + ": " + e.what());
    }
}

inline void validate(const RunConfig& cfg)
{
    if (cfg.families.empty())
        throw ConfigError("families: at least one surface family is required");
    for (std::size_t i = 0; i < cfg.families.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.families.size(); ++j)
            if (cfg.families[i] == cfg.families[j])
                throw ConfigError("families: duplicate entry");
    FieldSpec spec{cfg.families.front(), cfg.a, cfg.b, cfg.c, 0.0, cfg.domain};
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.shape_count < 1)
        throw ConfigError("shape_count: the shape-factor list is empty");
    if (cfg.grid.nx < 2 || cfg.grid.ny < 2 || cfg.grid.nz < 2)
        throw ConfigError("grid: every axis needs at least 2 nodes");
    if (cfg.points < 1)
        throw ConfigError("points: budget must be >= 1");
    if (cfg.rips_max_radius < 0.0)
        throw ConfigError("rips_max_radius: must be >= 0");
    if (cfg.rips_max_dim > 3)
        throw ConfigError("rips_max_dim: must be in [0, 3]");
    if (cfg.entropy_dim > 2)
        throw ConfigError("entropy_dim: must be in [0, 2]");
    if (cfg.models.empty())
        throw ConfigError("models: at least one model kind is required");
    if (cfg.max_degree < cfg.min_degree)
        throw ConfigError("max_degree: must be >= min_degree");
    if (cfg.n_splits < 2)
        throw ConfigError("n_splits: must be >= 2");
    if (cfg.jobs < 1)
        throw ConfigError("jobs: must be >= 1");
}

inline RunConfig parse_config(std::string_view text, RunConfig cfg = {})
{
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        try {
            set_option(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path, RunConfig cfg = {})
{
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, std::move(cfg));
}

/// Canonical text of every key that influences the outputs, one per line in
/// a fixed order; parse_config(format_config(c)) reproduces c.
inline std::string format_config(const RunConfig& cfg)
{
    std::string families;
    for (Family f : cfg.families)
        families += (families.empty() ? "" : ",") + std::string(to_string(f));
    std::string models;
    for (ModelKind m : cfg.models)
        models += (models.empty() ? "" : ",") + std::string(to_string(m));
    const auto& g = cfg.grid;

    std::string out;
    auto line = [&](std::string_view k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
    line("families", families);
    line("a", format_double(cfg.a));
    line("b", format_double(cfg.b));
    line("c", format_double(cfg.c));
    line("domain_min", detail::triple_text(cfg.domain.lo));
    line("domain_max", detail::triple_text(cfg.domain.hi));
    line("shape_factors", std::string(to_string(cfg.shape_factors)));
    line("shape_count", std::to_string(cfg.shape_count));
    line("grid", g.nx == g.ny && g.ny == g.nz
                     ? std::to_string(g.nx)
                     : std::to_string(g.nx) + "," + std::to_string(g.ny) + "," + std::to_string(g.nz));
    line("points", std::to_string(cfg.points));
    line("solid_side", std::string(to_string(cfg.solid_side)));
    line("filtration", std::string(to_string(cfg.filtration)));
    line("rips_max_radius", format_double(cfg.rips_max_radius));
    line("rips_max_dim", std::to_string(cfg.rips_max_dim));
    line("entropy_dim", std::to_string(cfg.entropy_dim));
    line("infinite_bars", std::string(to_string(cfg.infinite_bars)));
    line("models", models);
    line("min_degree", std::to_string(cfg.min_degree));
    line("max_degree", std::to_string(cfg.max_degree));
    line("n_splits", std::to_string(cfg.n_splits));
    line("seed", std::to_string(cfg.seed));
    return out;
}

} // namespace tpms::pipeline

#endif // TPMS_PIPELINE_CONFIG_HPP
