#ifndef TPMS_PIPELINE_REPORT_HPP
#define TPMS_PIPELINE_REPORT_HPP

// Regression outputs: cross-validation tables, model coefficients, plots and
// the side-by-side comparison against the embedded reference tables.

#include "tpms/exact_fit.hpp"
#include "tpms/fixtures.hpp"
#include "tpms/io.hpp"
#include "tpms/pipeline/svg.hpp"
#include "tpms/regress.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace tpms::pipeline {

inline constexpr std::array<std::string_view, 4> kResponses{"porosity_schwarz", "porosity_gyroid", "pe1_schwarz",
                                                            "pe1_gyroid"};
inline constexpr std::string_view kDatasetHeader = "d,porosity_schwarz,porosity_gyroid,pe1_schwarz,pe1_gyroid";

// ---------------------------------------------------------------------------
// dataset.csv

/// One row per shape factor; a missing measurement is an empty optional.
struct DatasetTable {
    std::vector<double> d;
    std::array<std::vector<std::optional<double>>, 4> columns;

    /// The response as a Dataset, or nullopt when any row lacks a value.
    std::optional<Dataset> response(std::size_t col) const
    {
        Dataset out{std::string(kResponses[col]), {}, {}};
        for (std::size_t r = 0; r < d.size(); ++r) {
            if (!columns[col][r])
                return std::nullopt;
            out.d.push_back(d[r]);
            out.y.push_back(*columns[col][r]);
        }
        return out;
    }
    bool partially_filled(std::size_t col) const
    {
        bool any = false, all = true;
        for (const auto& v : columns[col]) {
            any = any || v.has_value();
            all = all && v.has_value();
        }
        return any && !all;
    }
};

inline std::string format_dataset(const DatasetTable& t)
{
    std::string out = std::string(kDatasetHeader) + "\n";
    for (std::size_t r = 0; r < t.d.size(); ++r) {
        out += format_double(t.d[r]);
        for (const auto& col : t.columns) {
            out += ',';
            if (col[r])
                out += format_double(*col[r]);
        }
        out += '\n';
    }
    return out;
}

inline DatasetTable parse_dataset(std::string_view text)
{
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != kDatasetHeader)
        throw ParseError("dataset: expected header '" + std::string(kDatasetHeader) + "'");
    DatasetTable t;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (trim(lines[n]).empty())
            continue;
        const auto cells = split(trim(lines[n]), ',');
        if (cells.size() != 5)
            throw ParseError("dataset: row " + std::to_string(n) + " must have 5 fields");
        t.d.push_back(parse_finite(cells[0]));
        for (std::size_t c = 0; c < 4; ++c)
            t.columns[c].push_back(trim(cells[c + 1]).empty() ? std::nullopt
                                                               : std::optional<double>(parse_finite(cells[c + 1])));
    }
    return t;
}

/// The embedded porosity and entropy fixtures as a complete table.
inline DatasetTable fixture_table()
{
    DatasetTable t;
    for (std::size_t r = 0; r < fixtures::kPorosityTable.size(); ++r) {
        const auto& p = fixtures::kPorosityTable[r];
        const auto& e = fixtures::kEntropyTable[r];
        t.d.push_back(p.d);
        t.columns[0].push_back(p.schwarz);
        t.columns[1].push_back(p.gyroid);
        t.columns[2].push_back(fixtures::pe1_schwarz(e));
        t.columns[3].push_back(fixtures::pe1_gyroid(e));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Degree sweeps and their files

struct FitResults {
    std::vector<Dataset> data;     // responses that were fitted
    std::vector<CVReport> reports; // data-major, then kind in config order

    std::vector<const CVReport*> for_response(std::string_view response) const
    {
        std::vector<const CVReport*> out;
        for (const auto& r : reports)
            if (r.response == response)
                out.push_back(&r);
        return out;
    }
    const CVReport* find(std::string_view response, ModelKind kind) const
    {
        for (const auto& r : reports)
            if (r.response == response && r.kind == kind)
                return &r;
        return nullptr;
    }
};

inline FitResults run_fits(std::vector<Dataset> data, const std::vector<ModelKind>& kinds, int min_degree,
                           int max_degree, int n_splits, unsigned jobs)
{
    FitResults res;
    res.data = std::move(data);
    for (const auto& ds : res.data)
        for (ModelKind k : kinds)
            res.reports.push_back(sweep_degrees(ds, k, min_degree, max_degree, n_splits, jobs));
    return res;
}

inline std::string format_cv_report(const FitResults& res)
{
    std::string out = "response,kind,degree,fold,rmse\n";
    for (const auto& rep : res.reports)
        for (const auto& dr : rep.degrees) {
            const std::string prefix = rep.response + "," + std::string(to_string(rep.kind)) + "," +
                                       std::to_string(dr.degree) + ",";
            for (std::size_t f = 0; f < dr.fold_rmse.size(); ++f)
                out += prefix + std::to_string(f + 1) + "," + format_double(dr.fold_rmse[f]) + "\n";
            out += prefix + "mean," + format_double(dr.mean_rmse) + "\n";
        }
    return out;
}

inline std::string format_models(const FitResults& res)
{
    int width = 0;
    for (const auto& rep : res.reports)
        for (const auto& dr : rep.degrees)
            width = std::max(width, dr.degree + 1);
    std::string out = "response,kind,degree";
    for (int k = 0; k < width; ++k)
        out += ",c" + std::to_string(k);
    out += '\n';
    for (const auto& rep : res.reports)
        for (const auto& dr : rep.degrees) {
            out += rep.response + "," + std::string(to_string(rep.kind)) + "," + std::to_string(dr.degree);
            for (int k = 0; k < width; ++k) {
                out += ',';
                if (static_cast<std::size_t>(k) < dr.full_fit.coefficients.size())
                    out += format_double(dr.full_fit.coefficients[static_cast<std::size_t>(k)]);
            }
            out += '\n';
        }
    return out;
}

inline std::string format_selection(const FitResults& res)
{
    std::string out = "response,kind,best_degree,mean_rmse\n";
    for (const auto& rep : res.reports) {
        const int best = select_degree(rep);
        out += rep.response + "," + std::string(to_string(rep.kind)) + "," + std::to_string(best) + "," +
               format_double(rep.at_degree(best).mean_rmse) + "\n";
    }
    return out;
}

inline Chart rmse_chart(const Dataset& data, const FitResults& res)
{
    Chart ch{"RMSE vs polynomial degree: " + data.response, "degree", "RMSE", true, {}};
    for (const CVReport* rep : res.for_response(data.response)) {
        Series test{std::string(to_string(rep->kind)) + " mean test", {}, {}, false, false};
        Series train{std::string(to_string(rep->kind)) + " training", {}, {}, false, true};
        for (const auto& dr : rep->degrees) {
            test.x.push_back(dr.degree);
            test.y.push_back(dr.mean_rmse);
            train.x.push_back(dr.degree);
            train.y.push_back(training_rmse(dr.full_fit, data));
        }
        ch.series.push_back(std::move(test));
        ch.series.push_back(std::move(train));
    }
    return ch;
}

inline Chart best_model_chart(const Dataset& data, const FitResults& res)
{
    Chart ch{"Best models: " + data.response, "shape factor d", data.response, false, {}};
    ch.series.push_back({"data", data.d, data.y, true, false});
    const double lo = *std::min_element(data.d.begin(), data.d.end());
    const double hi = *std::max_element(data.d.begin(), data.d.end());
    for (const CVReport* rep : res.for_response(data.response)) {
        const int best = select_degree(*rep);
        const FitModel& m = rep->at_degree(best).full_fit;
        Series s{std::string(to_string(rep->kind)) + " degree " + std::to_string(best), {}, {}, false,
                 rep->kind == ModelKind::ExpOfPolynomial};
        for (int i = 0; i <= 100; ++i) {
            const double x = lo + (hi - lo) * i / 100.0;
            s.x.push_back(x);
            s.y.push_back(m.predict(x));
        }
        ch.series.push_back(std::move(s));
    }
    return ch;
}

inline void write_fit_outputs(const std::filesystem::path& dir, const FitResults& res)
{
    write_file_atomic(dir / "cv_report.csv", format_cv_report(res));
    write_file_atomic(dir / "models.csv", format_models(res));
    write_file_atomic(dir / "selection.csv", format_selection(res));
    for (const auto& ds : res.data) {
        write_file_atomic(dir / "plots" / ("rmse_" + ds.response + ".svg"), render_svg(rmse_chart(ds, res)));
        write_file_atomic(dir / "plots" / ("best_" + ds.response + ".svg"), render_svg(best_model_chart(ds, res)));
    }
}

// ---------------------------------------------------------------------------
// Comparison with the reference tables

/// Fisher-Yates shuffle of 0..n-1 driven by a 32-bit MT19937 stream seeded
/// with `seed`, drawing each bounded index by masked rejection. This is the
/// permutation behind the shuffled k-fold splits of NumPy's legacy
/// RandomState, so those splits can be replayed exactly.
inline std::vector<std::size_t> legacy_shuffle(std::size_t n, std::uint32_t seed)
{
    std::mt19937 gen(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i-- > 1;) {
        std::uint64_t mask = i;
        for (int shift = 1; shift <= 32; shift *= 2)
            mask |= mask >> shift;
        std::uint64_t j = 0;
        do {
            j = gen() & mask;
        } while (j > i);
        std::swap(idx[i], idx[static_cast<std::size_t>(j)]);
    }
    return idx;
}

/// k folds of consecutive chunks of legacy_shuffle(n, seed); the first n % k
/// folds get one extra row.
inline std::vector<std::vector<std::size_t>> shuffled_folds(std::size_t n, int n_splits, std::uint32_t seed)
{
    const auto perm = legacy_shuffle(n, seed);
    const std::size_t k = static_cast<std::size_t>(n_splits);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                        perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

inline constexpr double kRmseTolerance = 0.02;
inline constexpr double kCoefficientTolerance = 0.02;
inline constexpr double kOracleTolerance = 1e-9;

struct ReportRow {
    std::string section; // rmse | shuffled | selection | model | oracle
    std::string response;
    std::string kind;
    int degree = 0;
    std::string reference;
    std::string ours;
    std::string oracle;
    double delta = 0.0;
    std::string status; // PASS | FLAG | FAIL
};

struct ReproduceReport {
    std::vector<ReportRow> rows;
    double max_oracle_delta = 0.0;

    std::size_t count(std::string_view section, std::string_view status = {}) const
    {
        return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const ReportRow& r) {
            return r.section == section && (status.empty() || r.status == status);
        }));
    }
};

namespace report_detail {

inline std::string fixed(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string join(const std::vector<double>& v, int digits)
{
    std::string out;
    for (double x : v)
        out += (out.empty() ? "" : " ") + fixed(x, digits);
    return out;
}

/// Mean test RMSE over the given folds using exact rational fits.
inline double exact_mean_rmse(const Dataset& data, int degree, ModelKind kind,
                              const std::vector<std::vector<std::size_t>>& folds)
{
    double total = 0.0;
    for (const auto& test : folds) {
        std::vector<std::size_t> train;
        for (std::size_t r = 0; r < data.size(); ++r)
            if (std::find(test.begin(), test.end(), r) == test.end())
                train.push_back(r);
        const FitModel model = exact_fit(data.subset(train), degree, kind);
        const Dataset held = data.subset(test);
        std::vector<double> pred;
        for (double x : held.d)
            pred.push_back(model.predict(x));
        total += rmse(held.y, pred);
    }
    return total / static_cast<double>(folds.size());
}

// shuffle_seed: the legacy_shuffle seed whose folds reproduce the column;
// -1 where the contiguous folds already do.
struct ReferenceColumn {
    const std::array<fixtures::RmseRow, 8>* table;
    std::string_view response;
    ModelKind kind;
    bool schwarz;
    int shuffle_seed;
};

inline constexpr std::array<ReferenceColumn, 6> kReference{{
    {&fixtures::kPe1PolynomialRmse, "pe1_schwarz", ModelKind::Polynomial, true, 21},
    {&fixtures::kPe1PolynomialRmse, "pe1_gyroid", ModelKind::Polynomial, false, 42},
    {&fixtures::kPe1ExponentialRmse, "pe1_schwarz", ModelKind::ExpOfPolynomial, true, 42},
    {&fixtures::kPe1ExponentialRmse, "pe1_gyroid", ModelKind::ExpOfPolynomial, false, 42},
    {&fixtures::kPorosityRmse, "porosity_schwarz", ModelKind::Polynomial, true, -1},
    {&fixtures::kPorosityRmse, "porosity_gyroid", ModelKind::Polynomial, false, -1},
}};

} // namespace report_detail

/// Compares the sweeps in `res` (run on the fixture data) with the reference
/// RMSE tables, degree choices and models, and audits every fit against the
/// exact solver.
inline ReproduceReport build_reproduce_report(const FitResults& res, int n_splits)
{
    using namespace report_detail;
    ReproduceReport rep;
    auto dataset_for = [&](std::string_view response) -> const Dataset& {
        for (const auto& ds : res.data)
            if (ds.response == response)
                return ds;
        throw std::out_of_range("no dataset for " + std::string(response));
    };

    for (const auto& col : kReference) {
        const CVReport* cv = res.find(col.response, col.kind);
        if (!cv)
            continue;
        const Dataset& ds = dataset_for(col.response);
        for (const auto& row : *col.table) {
            const double reference = col.schwarz ? row.schwarz : row.gyroid;
            const double ours = cv->at_degree(row.degree).mean_rmse;
            const double exact =
                exact_mean_rmse(ds, row.degree, col.kind, contiguous_folds(ds.size(), n_splits));
            const double delta = ours - reference;
            rep.rows.push_back({"rmse", std::string(col.response), std::string(to_string(col.kind)), row.degree,
                                format_double(reference), format_double(ours), format_double(exact), delta,
                                std::abs(delta) <= kRmseTolerance ? "PASS" : "FLAG"});
        }
    }

    for (const auto& col : kReference) {
        if (col.shuffle_seed < 0 || !res.find(col.response, col.kind))
            continue;
        const Dataset& ds = dataset_for(col.response);
        const auto folds = shuffled_folds(ds.size(), n_splits, static_cast<std::uint32_t>(col.shuffle_seed));
        for (const auto& row : *col.table) {
            const double reference = col.schwarz ? row.schwarz : row.gyroid;
            const double ours = cross_validate(ds, row.degree, col.kind, folds).mean_rmse;
            const double exact = exact_mean_rmse(ds, row.degree, col.kind, folds);
            const double delta = ours - reference;
            rep.rows.push_back({"shuffled", std::string(col.response), std::string(to_string(col.kind)), row.degree,
                                format_double(reference), format_double(ours), format_double(exact), delta,
                                std::abs(delta) <= kRmseTolerance ? "PASS" : "FLAG"});
        }
    }

    for (const auto& col : kReference) {
        const CVReport* cv = res.find(col.response, col.kind);
        if (!cv)
            continue;
        std::vector<int> degrees;
        std::vector<double> means;
        for (const auto& row : *col.table) {
            degrees.push_back(row.degree);
            means.push_back(col.schwarz ? row.schwarz : row.gyroid);
        }
        const int reference = select_degree(degrees, means);
        const int ours = select_degree(*cv);
        rep.rows.push_back({"selection", std::string(col.response), std::string(to_string(col.kind)), ours,
                            std::to_string(reference), std::to_string(ours), "", static_cast<double>(ours - reference),
                            ours == reference ? "PASS" : "FLAG"});
    }

    for (const auto& model : fixtures::kReportedModels) {
        const CVReport* cv = res.find(model.response, ModelKind::Polynomial);
        if (!cv)
            continue;
        const auto& fit = cv->at_degree(model.degree).full_fit.coefficients;
        const auto exact = exact_fit(dataset_for(model.response), model.degree, ModelKind::Polynomial).coefficients;
        std::vector<double> reference(model.coefficients.begin(),
                                  model.coefficients.begin() + static_cast<std::ptrdiff_t>(model.degree + 1));
        double worst = 0.0;
        for (std::size_t k = 0; k < reference.size(); ++k)
            worst = std::max(worst, std::abs(fit[k] - reference[k]));
        rep.rows.push_back({"model", std::string(model.response), "polynomial", model.degree, join(reference, 3),
                            join(fit, 6), join(exact, 6), worst, worst <= kCoefficientTolerance ? "PASS" : "FLAG"});
    }

    for (const auto& cv : res.reports) {
        const Dataset& ds = dataset_for(cv.response);
        for (const auto& dr : cv.degrees) {
            const auto exact = exact_fit(ds, dr.degree, cv.kind).coefficients;
            const double delta = max_relative_difference(dr.full_fit.coefficients, exact);
            rep.max_oracle_delta = std::max(rep.max_oracle_delta, delta);
            rep.rows.push_back({"oracle", cv.response, std::string(to_string(cv.kind)), dr.degree, "",
                                format_double(delta), "0", delta, delta < kOracleTolerance ? "PASS" : "FAIL"});
        }
    }
    return rep;
}

inline std::string format_report_csv(const ReproduceReport& rep)
{
    std::string out = "section,response,kind,degree,reference,ours,oracle,delta,status\n";
    for (const auto& r : rep.rows)
        out += r.section + "," + r.response + "," + r.kind + "," + std::to_string(r.degree) + "," + r.reference + "," +
               r.ours + "," + r.oracle + "," + format_double(r.delta) + "," + r.status + "\n";
    return out;
}

inline std::string format_report_text(const ReproduceReport& rep)
{
    using report_detail::fixed;
    auto value = [](const std::string& text) {
        const double v = parse_double(text);
        char buf[32];
        std::snprintf(buf, sizeof buf, std::abs(v) < 1e5 ? "%.6f" : "%.4e", v);
        return std::string(buf);
    };
    std::string out;
    char line[512];

    auto rmse_table = [&](std::string_view section) {
        std::snprintf(line, sizeof line, "  %-17s %-11s %3s %12s %12s %12s %12s  %s\n", "response", "kind", "deg",
                      "reference", "computed", "exact", "delta", "status");
        out += line;
        for (const auto& r : rep.rows)
            if (r.section == section) {
                std::snprintf(line, sizeof line, "  %-17s %-11s %3d %12s %12s %12s %12s  %s\n", r.response.c_str(),
                              r.kind.c_str(), r.degree, value(r.reference).c_str(), value(r.ours).c_str(),
                              value(r.oracle).c_str(), value(format_double(r.delta)).c_str(), r.status.c_str());
                out += line;
            }
    };

    out += "Mean test RMSE, contiguous 4-fold CV, reference vs computed (PASS within +/-" + fixed(kRmseTolerance, 2) +
           ")\n";
    rmse_table("rmse");

    out += "\nCross-check: the same sweep on shuffled folds (legacy MT19937 shuffle, seed 21 for pe1_schwarz\n"
           "polynomial, 42 otherwise); the porosity columns are already matched by contiguous folds\n";
    rmse_table("shuffled");

    out += "\nSelected degree (minimum mean test RMSE, contiguous folds, lowest degree on ties)\n";
    for (const auto& r : rep.rows)
        if (r.section == "selection") {
            std::snprintf(line, sizeof line, "  %-17s %-11s reference %s computed %s  %s\n", r.response.c_str(),
                          r.kind.c_str(), r.reference.c_str(), r.ours.c_str(), r.status.c_str());
            out += line;
        }

    out += "\nReference models vs full-data least squares, coefficients c0..ck (PASS within +/-" +
           fixed(kCoefficientTolerance, 2) + ")\n";
    for (const auto& r : rep.rows)
        if (r.section == "model") {
            std::snprintf(line, sizeof line,
                          "  %-17s degree %d  %s  max |delta| %.4f\n    reference %s\n    computed  %s\n    exact     %s\n",
                          r.response.c_str(), r.degree, r.status.c_str(), r.delta, r.reference.c_str(), r.ours.c_str(),
                          r.oracle.c_str());
            out += line;
        }

    std::size_t flags = 0, fails = 0;
    for (const auto& r : rep.rows) {
        flags += r.status == "FLAG";
        fails += r.status == "FAIL";
    }
    std::snprintf(line, sizeof line,
                  "\nFloating-point fits vs exact rational solver: %zu fits, max relative delta %.3e, %zu FAIL\n"
                  "Totals: %zu PASS, %zu FLAG, %zu FAIL\n",
                  rep.count("oracle"), rep.max_oracle_delta, rep.count("oracle", "FAIL"),
                  rep.rows.size() - flags - fails, flags, fails);
    out += line;
    return out;
}

} // namespace tpms::pipeline

#endif // TPMS_PIPELINE_REPORT_HPP
