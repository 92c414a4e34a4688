#ifndef TPMS_EXACT_FIT_HPP
#define TPMS_EXACT_FIT_HPP

// Polynomial least squares solved exactly over the rationals. Every double
// input is representable as a fraction, so the coefficients are exact until
// the final conversion; used to audit the floating-point fits.

#include "tpms/regress.hpp"

#include <gmpxx.h>

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace tpms {

inline std::vector<double> exact_polynomial_fit(std::span<const double> x, std::span<const double> t, int degree)
{
    if (degree < 0 || x.size() != t.size() || x.size() < static_cast<std::size_t>(degree + 1))
        throw RegressionError("exact fit: invalid arguments");
    const std::size_t m = static_cast<std::size_t>(degree) + 1;

    // Power sums S_k = sum x^k and moments T_k = sum t x^k.
    std::vector<mpq_class> S(2 * m - 1, 0), T(m, 0);
    for (std::size_t r = 0; r < x.size(); ++r) {
        const mpq_class xr(x[r]);
        const mpq_class tr(t[r]);
        mpq_class p = 1;
        for (std::size_t k = 0; k < S.size(); ++k) {
            S[k] += p;
            if (k < m)
                T[k] += tr * p;
            p *= xr;
        }
    }

    std::vector<std::vector<mpq_class>> M(m, std::vector<mpq_class>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            M[i][j] = S[i + j];

    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && sgn(M[piv][col]) == 0)
            ++piv;
        if (piv == m)
            throw RegressionError("exact fit: singular normal equations");
        std::swap(M[piv], M[col]);
        std::swap(T[piv], T[col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            if (sgn(M[r][col]) == 0)
                continue;
            const mpq_class f = M[r][col] / M[col][col];
            for (std::size_t k = col; k < m; ++k)
                M[r][k] -= f * M[col][k];
            T[r] -= f * T[col];
        }
    }
    std::vector<mpq_class> c(m);
    for (std::size_t i = m; i-- > 0;) {
        mpq_class acc = T[i];
        for (std::size_t k = i + 1; k < m; ++k)
            acc -= M[i][k] * c[k];
        c[i] = acc / M[i][i];
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = c[i].get_d();
    return out;
}

/// Same model as fit(data, degree, kind), solved exactly. The exponential
/// kind fits ln y, with the logarithms taken in double precision.
inline FitModel exact_fit(const Dataset& data, int degree, ModelKind kind)
{
    data.validate();
    std::vector<double> t = data.y;
    if (kind == ModelKind::ExpOfPolynomial)
        for (double& v : t) {
            if (!(v > 0.0))
                throw RegressionError("exponential fit needs strictly positive responses");
            v = std::log(v);
        }
    return {kind, degree, exact_polynomial_fit(data.d, t, degree)};
}

/// max_i |a_i - b_i| / max_i |b_i|.
inline double max_relative_difference(std::span<const double> a, std::span<const double> b)
{
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace tpms

#endif // TPMS_EXACT_FIT_HPP
