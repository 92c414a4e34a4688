#ifndef TPMS_REGRESS_HPP
#define TPMS_REGRESS_HPP

// Univariate polynomial and exp-of-polynomial least squares with contiguous
// k-fold cross-validation.

#include "tpms/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tpms {

class RegressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { Polynomial, ExpOfPolynomial };

inline std::string_view to_string(ModelKind k) { return k == ModelKind::Polynomial ? "polynomial" : "exponential"; }

/// Rows of (shape factor, response).
struct Dataset {
    std::string response;
    std::vector<double> d;
    std::vector<double> y;

    std::size_t size() const { return d.size(); }

    void validate() const
    {
        if (d.size() != y.size())
            throw RegressionError("dataset: column lengths differ");
        if (d.size() < 2)
            throw RegressionError("dataset: need at least 2 rows");
        for (std::size_t i = 0; i < d.size(); ++i)
            if (!std::isfinite(d[i]) || !std::isfinite(y[i]))
                throw RegressionError("dataset: non-finite value");
        if (std::set<double>(d.begin(), d.end()).size() != d.size())
            throw RegressionError("dataset: shape factors must be distinct");
    }

    Dataset subset(std::span<const std::size_t> rows) const
    {
        Dataset s{response, {}, {}};
        for (std::size_t r : rows) {
            s.d.push_back(d[r]);
            s.y.push_back(y[r]);
        }
        return s;
    }
};

/// c0 + c1 d + ... + ck d^k, or exp of that polynomial.
struct FitModel {
    ModelKind kind = ModelKind::Polynomial;
    int degree = 0;
    std::vector<double> coefficients;

    double polynomial(double x) const
    {
        double acc = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }
    double predict(double x) const
    {
        const double p = polynomial(x);
        return kind == ModelKind::Polynomial ? p : std::exp(p);
    }
};

namespace detail {

inline std::vector<double> least_squares_polynomial(std::span<const double> x, std::span<const double> t, int degree,
                                                    bool intercept)
{
    if (degree < 0)
        throw RegressionError("degree must be non-negative");
    const int first = intercept ? 0 : 1;
    const int cols = degree + 1 - first;
    if (x.size() < static_cast<std::size_t>(degree + 1))
        throw RegressionError("need at least degree + 1 rows");
    if (std::set<double>(x.begin(), x.end()).size() < static_cast<std::size_t>(degree + 1))
        throw RegressionError("rank-deficient design: fewer distinct shape factors than coefficients");

    Eigen::MatrixXd A(static_cast<Eigen::Index>(x.size()), cols);
    Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
    for (std::size_t r = 0; r < x.size(); ++r) {
        double pw = 1.0;
        for (int k = 0; k <= degree; ++k) {
            if (k >= first)
                A(static_cast<Eigen::Index>(r), k - first) = pw;
            pw *= x[r];
        }
        b(static_cast<Eigen::Index>(r)) = t[r];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < cols)
        throw RegressionError("rank-deficient design");
    const Eigen::VectorXd sol = qr.solve(b);

    std::vector<double> coeffs(static_cast<std::size_t>(degree + 1), 0.0);
    for (int k = first; k <= degree; ++k)
        coeffs[static_cast<std::size_t>(k)] = sol(k - first);
    return coeffs;
}

} // namespace detail

inline FitModel fit_polynomial(const Dataset& data, int degree, bool intercept = true)
{
    data.validate();
    return {ModelKind::Polynomial, degree, detail::least_squares_polynomial(data.d, data.y, degree, intercept)};
}

/// Polynomial least squares on ln y; predicts exp(P(d)) = e^{c0} e^{c1 d + ...}.
inline FitModel fit_exponential(const Dataset& data, int degree)
{
    data.validate();
    std::vector<double> logs(data.y.size());
    for (std::size_t i = 0; i < data.y.size(); ++i) {
        if (!(data.y[i] > 0.0))
            throw RegressionError("exponential fit needs strictly positive responses");
        logs[i] = std::log(data.y[i]);
    }
    return {ModelKind::ExpOfPolynomial, degree, detail::least_squares_polynomial(data.d, logs, degree, true)};
}

inline FitModel fit(const Dataset& data, int degree, ModelKind kind)
{
    return kind == ModelKind::Polynomial ? fit_polynomial(data, degree) : fit_exponential(data, degree);
}

inline double rmse(std::span<const double> actual, std::span<const double> predicted)
{
    if (actual.size() != predicted.size())
        throw RegressionError("rmse: length mismatch");
    if (actual.empty())
        throw RegressionError("rmse: empty input");
    double ss = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double r = actual[i] - predicted[i];
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(actual.size()));
}

inline double training_rmse(const FitModel& model, const Dataset& data)
{
    std::vector<double> pred(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        pred[i] = model.predict(data.d[i]);
    return rmse(data.y, pred);
}

struct DegreeReport {
    int degree = 0;
    std::vector<double> fold_rmse;
    double mean_rmse = 0.0;
    FitModel full_fit;
};

struct CVReport {
    std::string response;
    ModelKind kind = ModelKind::Polynomial;
    int n_splits = 4;
    std::vector<DegreeReport> degrees;

    const DegreeReport& at_degree(int degree) const
    {
        for (const auto& r : degrees)
            if (r.degree == degree)
                return r;
        throw std::out_of_range("no report for degree " + std::to_string(degree));
    }
};

/// Test-row sets of contiguous, unshuffled folds: fold f holds rows
/// [f*m, (f+1)*m) with m = n / n_splits.
inline std::vector<std::vector<std::size_t>> contiguous_folds(std::size_t n, int n_splits)
{
    if (n_splits < 2)
        throw RegressionError("n_splits must be >= 2");
    if (n % static_cast<std::size_t>(n_splits) != 0)
        throw RegressionError("row count must be divisible by n_splits");
    const std::size_t m = n / static_cast<std::size_t>(n_splits);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(n_splits));
    for (std::size_t r = 0; r < n; ++r)
        folds[r / m].push_back(r);
    return folds;
}

/// Trains on the complement of each test set and scores the held-out rows.
inline DegreeReport cross_validate(const Dataset& data, int degree, ModelKind kind,
                                   const std::vector<std::vector<std::size_t>>& test_folds)
{
    data.validate();
    DegreeReport rep;
    rep.degree = degree;
    for (const auto& test : test_folds) {
        std::vector<bool> held_out(data.size(), false);
        for (std::size_t r : test)
            held_out.at(r) = true;
        std::vector<std::size_t> train;
        for (std::size_t r = 0; r < data.size(); ++r)
            if (!held_out[r])
                train.push_back(r);
        const FitModel model = fit(data.subset(train), degree, kind);
        const Dataset held = data.subset(test);
        std::vector<double> pred(held.size());
        for (std::size_t i = 0; i < held.size(); ++i)
            pred[i] = model.predict(held.d[i]);
        rep.fold_rmse.push_back(rmse(held.y, pred));
    }
    rep.mean_rmse = std::accumulate(rep.fold_rmse.begin(), rep.fold_rmse.end(), 0.0) /
                    static_cast<double>(rep.fold_rmse.size());
    rep.full_fit = fit(data, degree, kind);
    return rep;
}

inline DegreeReport kfold_rmse(const Dataset& data, int degree, ModelKind kind, int n_splits = 4)
{
    data.validate();
    return cross_validate(data, degree, kind, contiguous_folds(data.size(), n_splits));
}

inline CVReport sweep_degrees(const Dataset& data, ModelKind kind, int min_degree, int max_degree, int n_splits = 4,
                              unsigned jobs = 1)
{
    if (min_degree < 0 || max_degree < min_degree)
        throw RegressionError("invalid degree range");
    CVReport report{data.response, kind, n_splits, {}};
    report.degrees.resize(static_cast<std::size_t>(max_degree - min_degree + 1));
    parallel_for(report.degrees.size(), jobs, [&](std::size_t i) {
        report.degrees[i] = kfold_rmse(data, min_degree + static_cast<int>(i), kind, n_splits);
    });
    return report;
}

/// Degree with the smallest mean test RMSE; the lowest degree wins ties.
inline int select_degree(std::span<const int> degrees, std::span<const double> means)
{
    if (degrees.empty() || degrees.size() != means.size())
        throw RegressionError("select_degree: need matching non-empty inputs");
    std::size_t best = 0;
    for (std::size_t i = 1; i < degrees.size(); ++i) {
        if (means[i] < means[best] || (means[i] == means[best] && degrees[i] < degrees[best]))
            best = i;
    }
    return degrees[best];
}

inline int select_degree(const CVReport& report)
{
    std::vector<int> degrees;
    std::vector<double> means;
    for (const auto& r : report.degrees) {
        degrees.push_back(r.degree);
        means.push_back(std::isnan(r.mean_rmse) ? std::numeric_limits<double>::infinity() : r.mean_rmse);
    }
    return select_degree(degrees, means);
}

} // namespace tpms

#endif // TPMS_REGRESS_HPP
