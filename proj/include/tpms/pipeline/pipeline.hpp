#ifndef TPMS_PIPELINE_PIPELINE_HPP
#define TPMS_PIPELINE_PIPELINE_HPP

// End-to-end stages. Each (family, d) unit owns the directory
// <out>/<family>/<d>/ and every stage reads the files written by the one
// before it, so the subcommands compose to the same outputs as `all`.

#include "tpms/alpha.hpp"
#include "tpms/entropy.hpp"
#include "tpms/parallel.hpp"
#include "tpms/persistence.hpp"
#include "tpms/pipeline/config.hpp"
#include "tpms/pipeline/report.hpp"
#include "tpms/point_cloud.hpp"
#include "tpms/porosity.hpp"
#include "tpms/rips.hpp"
#include "tpms/surface_field.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tpms::pipeline {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kMissingUpstream = 3, kNumericalFailure = 4 };

/// An input that an earlier stage should have produced is absent or unreadable.
class MissingUpstream : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Log {
public:
    Log(std::ostream& os, bool quiet) : os_(os), quiet_(quiet) {}
    void info(const std::string& msg)
    {
        if (quiet_)
            return;
        std::lock_guard lock(mutex_);
        os_ << msg << '\n';
    }
    void warn(const std::string& msg)
    {
        std::lock_guard lock(mutex_);
        os_ << "warning: " << msg << '\n';
    }

private:
    std::ostream& os_;
    bool quiet_;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Units and paths

struct Unit {
    Family family;
    double d;
    fs::path dir;
};

inline std::string d_label(double d)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", d);
    std::string s = buf;
    return s == "-0.000000" ? "0.000000" : s;
}

inline std::vector<double> shape_factor_values(const RunConfig& cfg)
{
    if (cfg.shape_factors == ShapeFactorMode::Fixture)
        return shape_factors(0, ReferenceFixture{}).values;
    return shape_factors(cfg.shape_count, Seeded{cfg.seed}).values;
}

/// Family-major, d ascending.
inline std::vector<Unit> make_units(const RunConfig& cfg)
{
    const auto ds = shape_factor_values(cfg);
    std::set<std::string> labels;
    for (double d : ds)
        if (!labels.insert(d_label(d)).second)
            throw ConfigError("two shape factors share the directory label " + d_label(d));
    std::vector<Unit> units;
    for (Family f : cfg.families)
        for (double d : ds)
            units.push_back({f, d, cfg.out / std::string(to_string(f)) / d_label(d)});
    return units;
}

inline FieldSpec field_spec(const RunConfig& cfg, Family family, double d)
{
    return {family, cfg.a, cfg.b, cfg.c, d, cfg.domain};
}

inline std::string unit_name(const Unit& u) { return std::string(to_string(u.family)) + " d=" + d_label(u.d); }

inline std::string read_upstream(const fs::path& path)
{
    std::error_code ec;
    if (!fs::is_regular_file(path, ec))
        throw MissingUpstream("missing upstream file " + path.string());
    return read_text_file(path);
}

template <typename Parse>
auto parse_upstream(const fs::path& path, Parse parse)
{
    const std::string text = read_upstream(path);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw MissingUpstream("unreadable upstream file " + path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw MissingUpstream("unreadable upstream file " + path.string() + ": " + e.what());
    }
}

inline void ensure_writable(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw ConfigError("output directory " + dir.string() + " cannot be created");
    const fs::path probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out)
            throw ConfigError("output directory " + dir.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

// ---------------------------------------------------------------------------
// Stages

/// field.grid and points.csv per unit. points.csv holds the persistence input:
/// the farthest-point subsample of the isosurface crossings.
inline void stage_generate(const RunConfig& cfg, Log& log)
{
    const auto units = make_units(cfg);
    parallel_for(units.size(), cfg.jobs, [&](std::size_t i) {
        const Unit& u = units[i];
        const Grid3 grid = sample_grid(field_spec(cfg, u.family, u.d), cfg.grid);
        write_grid(u.dir / "field.grid", grid);
        const PointCloud surface = extract_isosurface_points(grid);
        const PointCloud kept = surface.empty() ? surface : subsample_fps(surface, cfg.points);
        write_points(u.dir / "points.csv", kept);
        if (surface.empty())
            log.warn("generate " + unit_name(u) + ": field has no sign change, point cloud is empty");
        else
            log.info("generate " + unit_name(u) + ": " + std::to_string(surface.size()) + " surface points, kept " +
                     std::to_string(kept.size()));
    });
}

inline void stage_porosity(const RunConfig& cfg, Log& log)
{
    const auto units = make_units(cfg);
    parallel_for(units.size(), cfg.jobs, [&](std::size_t i) {
        const Unit& u = units[i];
        const Grid3 grid = parse_upstream(u.dir / "field.grid", [](const std::string& t) { return parse_grid(t); });
        const PorosityResult r = voxel_porosity(grid, cfg.solid_side);
        write_file_atomic(u.dir / "porosity.csv", "fraction_negative,fraction_positive,vp\n" +
                                                      format_double(r.fraction_negative) + "," +
                                                      format_double(r.fraction_positive) + "," + format_double(r.vp) +
                                                      "\n");
        log.info("porosity " + unit_name(u) + ": vp " + format_double(r.vp));
    });
}

inline FilteredComplex build_filtration(const RunConfig& cfg, const PointCloud& cloud)
{
    if (cfg.filtration == Filtration::Alpha)
        return build_alpha(cloud, cfg.seed);
    const double radius = cfg.rips_max_radius > 0.0 ? cfg.rips_max_radius : enclosing_radius(cloud);
    return build_rips(cloud, radius > 0.0 ? radius : 1.0, cfg.rips_max_dim);
}

inline void stage_persistence(const RunConfig& cfg, Log& log)
{
    const auto units = make_units(cfg);
    parallel_for(units.size(), cfg.jobs, [&](std::size_t i) {
        const Unit& u = units[i];
        const PointCloud cloud =
            parse_upstream(u.dir / "points.csv", [](const std::string& t) { return parse_points(t); });
        PersistenceDiagram diagram;
        if (!cloud.empty()) {
            const FilteredComplex complex = build_filtration(cfg, cloud);
            diagram = compute_persistence(complex);
            if (euler_characteristic(complex) != essential_euler(diagram))
                throw ComplexError("persistence " + unit_name(u) + ": Euler characteristic mismatch");
            log.info("persistence " + unit_name(u) + ": " + std::to_string(complex.size()) + " simplices, " +
                     std::to_string(diagram.pairs.size()) + " bars");
        } else {
            log.warn("persistence " + unit_name(u) + ": empty point cloud, empty diagram");
        }
        write_file_atomic(u.dir / "diagram.csv", format_diagram(diagram));
    });
}

inline EntropyConfig entropy_config(const RunConfig& cfg, const PersistenceDiagram& diagram)
{
    EntropyConfig ec;
    ec.dim = cfg.entropy_dim;
    if (cfg.infinite_bars == InfiniteBars::Clamp) {
        double top = 0.0;
        for (const auto& p : diagram.pairs) {
            top = std::max(top, p.birth);
            if (!p.infinite())
                top = std::max(top, p.death);
        }
        ec.infinite_policy = ClampToMaxFiltration{top};
    }
    return ec;
}

inline void stage_entropy(const RunConfig& cfg, Log& log)
{
    const auto units = make_units(cfg);
    parallel_for(units.size(), cfg.jobs, [&](std::size_t i) {
        const Unit& u = units[i];
        const PersistenceDiagram diagram =
            parse_upstream(u.dir / "diagram.csv", [](const std::string& t) { return parse_diagram(t); });
        const EntropyResult e = persistence_entropy(diagram, entropy_config(cfg, diagram));
        write_file_atomic(u.dir / "entropy.csv", "dim,value,bars,flag\n" + std::to_string(cfg.entropy_dim) + "," +
                                                     format_double(e.value) + "," + std::to_string(e.bars) + "," +
                                                     (e.empty ? "empty" : "ok") + "\n");
        if (e.empty)
            log.warn("entropy " + unit_name(u) + ": no finite bars in dimension " + std::to_string(cfg.entropy_dim));
        else
            log.info("entropy " + unit_name(u) + ": PE" + std::to_string(cfg.entropy_dim) + " " +
                     format_double(e.value) + " over " + std::to_string(e.bars) + " bars");
    });
}

/// Rebuilds dataset.csv (and flags.csv) from whatever per-unit results
/// exist; cells for stages that have not run stay empty.
inline DatasetTable assemble_dataset(const RunConfig& cfg)
{
    DatasetTable table;
    table.d = shape_factor_values(cfg);
    for (auto& col : table.columns)
        col.assign(table.d.size(), std::nullopt);
    std::string flags = "family,d,flag\n";

    for (Family f : cfg.families) {
        const std::size_t porosity_col = f == Family::SchwarzP ? 0 : 1;
        const std::size_t entropy_col = f == Family::SchwarzP ? 2 : 3;
        for (std::size_t r = 0; r < table.d.size(); ++r) {
            const fs::path dir = cfg.out / std::string(to_string(f)) / d_label(table.d[r]);
            std::error_code ec;
            if (fs::is_regular_file(dir / "porosity.csv", ec)) {
                const auto cells = split(trim(split(read_text_file(dir / "porosity.csv"), '\n').at(1)), ',');
                table.columns[porosity_col][r] = parse_finite(cells.at(2));
            }
            if (fs::is_regular_file(dir / "entropy.csv", ec)) {
                const auto cells = split(trim(split(read_text_file(dir / "entropy.csv"), '\n').at(1)), ',');
                table.columns[entropy_col][r] = parse_finite(cells.at(1));
                if (trim(cells.at(3)) != "ok")
                    flags += std::string(to_string(f)) + "," + d_label(table.d[r]) + ",empty_diagram\n";
            }
        }
    }
    write_file_atomic(cfg.out / "dataset.csv", format_dataset(table));
    write_file_atomic(cfg.out / "flags.csv", flags);
    return table;
}

inline FitResults fit_table(const RunConfig& cfg, const DatasetTable& table, Log& log)
{
    std::vector<Dataset> data;
    for (std::size_t c = 0; c < kResponses.size(); ++c) {
        if (auto ds = table.response(c))
            data.push_back(std::move(*ds));
        else if (table.partially_filled(c))
            log.warn("fit: column " + std::string(kResponses[c]) + " has missing values, skipped");
    }
    if (data.empty())
        throw MissingUpstream("dataset has no complete response column");
    if (table.d.size() % static_cast<std::size_t>(cfg.n_splits) != 0)
        throw ConfigError("n_splits = " + std::to_string(cfg.n_splits) + " does not divide the " +
                          std::to_string(table.d.size()) + " dataset rows");
    return run_fits(std::move(data), cfg.models, cfg.min_degree, cfg.max_degree, cfg.n_splits, cfg.jobs);
}

inline FitResults stage_fit(const RunConfig& cfg, Log& log)
{
    const fs::path path = cfg.dataset_path();
    const DatasetTable table = parse_upstream(path, [](const std::string& t) { return parse_dataset(t); });
    const FitResults res = fit_table(cfg, table, log);
    write_fit_outputs(cfg.out, res);
    for (const auto& rep : res.reports)
        log.info("fit " + rep.response + " " + std::string(to_string(rep.kind)) + ": best degree " +
                 std::to_string(select_degree(rep)));
    return res;
}

/// Fits the embedded fixture data into <out>/reproduce and compares with the
/// reference tables. Degrees 1..8, both kinds, regardless of the config.
inline ReproduceReport stage_reproduce(const RunConfig& cfg, Log& log, std::ostream& text_out)
{
    RunConfig fixed = cfg;
    fixed.models = {ModelKind::Polynomial, ModelKind::ExpOfPolynomial};
    fixed.min_degree = 1;
    fixed.max_degree = 8;
    fixed.n_splits = 4;
    const fs::path dir = cfg.out / "reproduce";
    const DatasetTable table = fixture_table();
    write_file_atomic(dir / "dataset.csv", format_dataset(table));
    const FitResults res = fit_table(fixed, table, log);
    write_fit_outputs(dir, res);
    const ReproduceReport rep = build_reproduce_report(res, fixed.n_splits);
    const std::string text = format_report_text(rep);
    write_file_atomic(dir / "report.csv", format_report_csv(rep));
    write_file_atomic(dir / "report.txt", text);
    text_out << text;
    return rep;
}

// ---------------------------------------------------------------------------
// Manifest

inline std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

/// manifest.txt: the hash of the canonical config, then `<sha256>  <path>` for
/// every file under the output directory in path order.
inline void write_manifest(const RunConfig& cfg)
{
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(cfg.out)) {
        if (!entry.is_regular_file())
            continue;
        const std::string rel = fs::relative(entry.path(), cfg.out).generic_string();
        if (rel == "manifest.txt" || entry.path().extension() == ".tmp")
            continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    std::string out = "config_sha256 " + sha256_hex(format_config(cfg)) + "\n";
    for (const auto& rel : files)
        out += sha256_hex(read_text_file(cfg.out / rel)) + "  " + rel + "\n";
    write_file_atomic(cfg.out / "manifest.txt", out);
}

// ---------------------------------------------------------------------------
// Commands

inline constexpr std::array<std::string_view, 7> kCommands{"generate", "porosity", "persistence", "entropy",
                                                           "fit",      "reproduce", "all"};

inline void run_stages(std::string_view command, const RunConfig& cfg, Log& log, std::ostream& out)
{
    if (command == "generate") {
        stage_generate(cfg, log);
    } else if (command == "porosity") {
        stage_porosity(cfg, log);
        assemble_dataset(cfg);
    } else if (command == "persistence") {
        stage_persistence(cfg, log);
    } else if (command == "entropy") {
        stage_entropy(cfg, log);
        assemble_dataset(cfg);
    } else if (command == "fit") {
        stage_fit(cfg, log);
    } else if (command == "reproduce") {
        stage_reproduce(cfg, log, out);
    } else if (command == "all") {
        stage_generate(cfg, log);
        stage_porosity(cfg, log);
        stage_persistence(cfg, log);
        stage_entropy(cfg, log);
        assemble_dataset(cfg);
        stage_fit(cfg, log);
    } else {
        throw ConfigError("unknown command '" + std::string(command) + "'");
    }
}

/// Runs one subcommand and maps failures onto exit codes.
inline int run_command(std::string_view command, const RunConfig& cfg, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr)
{
    Log log(err, cfg.quiet);
    try {
        validate(cfg);
        ensure_writable(cfg.out);
        run_stages(command, cfg, log, out);
        write_manifest(cfg);
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const MissingUpstream& e) {
        err << "missing upstream: " << e.what() << '\n';
        return kMissingUpstream;
    } catch (const ParseError& e) {
        err << "missing upstream: " << e.what() << '\n';
        return kMissingUpstream;
    } catch (const RegressionError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const DelaunayError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const ComplexError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::domain_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace tpms::pipeline

#endif // TPMS_PIPELINE_PIPELINE_HPP
