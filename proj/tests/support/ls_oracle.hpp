#ifndef TPMS_TESTS_LS_ORACLE_HPP
#define TPMS_TESTS_LS_ORACLE_HPP

// Least squares by exact rational normal equations: the double inputs are
// converted without rounding, so the only error is the final conversion back.

#include <gmpxx.h>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracle {

inline std::vector<double> normal_equations_fit(std::span<const double> x, std::span<const double> y, int degree)
{
    const std::size_t m = static_cast<std::size_t>(degree + 1);
    std::vector<std::vector<mpq_class>> A(m, std::vector<mpq_class>(m + 1, 0));
    std::vector<std::vector<mpq_class>> powers(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) {
        const mpq_class xr(x[r]);
        mpq_class p = 1;
        for (std::size_t k = 0; k < 2 * m; ++k) {
            powers[r].push_back(p);
            p *= xr;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t r = 0; r < x.size(); ++r)
                A[i][j] += powers[r][i + j];
        for (std::size_t r = 0; r < x.size(); ++r)
            A[i][m] += powers[r][i] * mpq_class(y[r]);
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && sgn(A[piv][col]) == 0)
            ++piv;
        if (piv == m)
            throw std::runtime_error("singular normal equations");
        std::swap(A[piv], A[col]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || sgn(A[r][col]) == 0)
                continue;
            const mpq_class f = A[r][col] / A[col][col];
            for (std::size_t k = col; k <= m; ++k)
                A[r][k] -= f * A[col][k];
        }
    }
    std::vector<double> c(m);
    for (std::size_t i = 0; i < m; ++i)
        c[i] = mpq_class(A[i][m] / A[i][i]).get_d();
    return c;
}

inline double relative_error(const std::vector<double>& got, const std::vector<double>& want)
{
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        diff = std::max(diff, std::abs(got[i] - want[i]));
        scale = std::max(scale, std::abs(want[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace oracle

#endif // TPMS_TESTS_LS_ORACLE_HPP
