#ifndef TPMS_TESTS_ORACLES_HPP
#define TPMS_TESTS_ORACLES_HPP

// Reference implementations used only by tests. They share no code with the
// library beyond the plain data types.

#include "tpms/delaunay.hpp"
#include "tpms/filtered_complex.hpp"
#include "tpms/geometry.hpp"
#include "tpms/point_cloud.hpp"

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using tpms::PointCloud;
using tpms::Vec3;

inline PointCloud random_ball(std::size_t n, std::uint64_t seed, double radius = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    PointCloud c;
    while (c.size() < n) {
        const Vec3 p{u(rng), u(rng), u(rng)};
        if (tpms::norm2(p) <= radius * radius)
            c.points.push_back(p);
    }
    return c;
}

inline PointCloud random_cube(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointCloud c;
    for (std::size_t i = 0; i < n; ++i)
        c.points.push_back({u(rng), u(rng), u(rng)});
    return c;
}

inline PointCloud circle(std::size_t n, double r = 1.0)
{
    PointCloud c;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        c.points.push_back({r * std::cos(t), r * std::sin(t), 0.0});
    }
    return c;
}

/// Fibonacci lattice on the unit sphere.
inline PointCloud sphere(std::size_t n)
{
    PointCloud c;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double r = std::sqrt(1.0 - z * z);
        const double t = golden * static_cast<double>(i);
        c.points.push_back({r * std::cos(t), r * std::sin(t), z});
    }
    return c;
}

inline mpq_class q(double v) { return mpq_class(v); }

/// det of the 4x4 matrix with rows (p_i, 1), expanded exactly.
inline int orientation(Vec3 a, Vec3 b, Vec3 c, Vec3 d)
{
    const std::array<Vec3, 4> p{a, b, c, d};
    std::array<std::array<mpq_class, 4>, 4> m;
    for (int i = 0; i < 4; ++i) {
        m[i][0] = q(p[i].x);
        m[i][1] = q(p[i].y);
        m[i][2] = q(p[i].z);
        m[i][3] = 1;
    }
    // Gaussian elimination with exact pivots.
    int sign = 1;
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        for (int r = col; r < 4; ++r)
            if (sgn(m[r][col]) != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            sign = -sign;
        }
        for (int r = col + 1; r < 4; ++r) {
            const mpq_class f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k)
                m[r][k] -= f * m[col][k];
        }
        sign *= sgn(m[col][col]);
    }
    return sign;
}

struct ExactSphere {
    mpq_class center[3];
    mpq_class radius2;

    mpq_class dist2(Vec3 p) const
    {
        const mpq_class dx = q(p.x) - center[0], dy = q(p.y) - center[1], dz = q(p.z) - center[2];
        return dx * dx + dy * dy + dz * dz;
    }
    bool strictly_inside(Vec3 p) const { return dist2(p) < radius2; }
};

/// Circumsphere of a non-degenerate tetrahedron; the centre is solved exactly
/// from the three bisector planes by Cramer's rule.
inline ExactSphere circumsphere(Vec3 a, Vec3 b, Vec3 c, Vec3 d)
{
    const std::array<Vec3, 3> others{b, c, d};
    mpq_class A[3][3], rhs[3];
    const mpq_class a2 = q(a.x) * q(a.x) + q(a.y) * q(a.y) + q(a.z) * q(a.z);
    for (int i = 0; i < 3; ++i) {
        const Vec3 p = others[static_cast<std::size_t>(i)];
        A[i][0] = 2 * (q(p.x) - q(a.x));
        A[i][1] = 2 * (q(p.y) - q(a.y));
        A[i][2] = 2 * (q(p.z) - q(a.z));
        rhs[i] = q(p.x) * q(p.x) + q(p.y) * q(p.y) + q(p.z) * q(p.z) - a2;
    }
    auto det3 = [](mpq_class M[3][3]) {
        return mpq_class(M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                         M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                         M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]));
    };
    const mpq_class D = det3(A);
    ExactSphere s;
    for (int k = 0; k < 3; ++k) {
        mpq_class M[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                M[i][j] = (j == k) ? rhs[i] : A[i][j];
        s.center[k] = det3(M) / D;
    }
    s.radius2 = s.dist2(a);
    return s;
}

inline bool strictly_inside_circumsphere(Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 e)
{
    return circumsphere(a, b, c, d).strictly_inside(e);
}

/// Number of (tetrahedron, vertex) pairs where the vertex lies strictly
/// inside the tetrahedron's circumsphere, plus tetrahedra that are not
/// positively oriented (by the library's convention det[a-d; b-d; c-d] > 0).
inline std::size_t delaunay_violations(const tpms::Tetrahedralization& t)
{
    const auto& P = t.vertices.points;
    std::size_t bad = 0;
    for (const auto& tet : t.tetrahedra) {
        if (orientation(P[tet[0]], P[tet[1]], P[tet[2]], P[tet[3]]) <= 0)
            ++bad;
        const ExactSphere s = circumsphere(P[tet[0]], P[tet[1]], P[tet[2]], P[tet[3]]);
        for (std::size_t v = 0; v < P.size(); ++v) {
            if (v == tet[0] || v == tet[1] || v == tet[2] || v == tet[3])
                continue;
            if (s.strictly_inside(P[v]))
                ++bad;
        }
    }
    return bad;
}

/// Exact total volume (times 6) of the tetrahedra.
inline mpq_class six_volume(const tpms::Tetrahedralization& t)
{
    const auto& P = t.vertices.points;
    mpq_class total = 0;
    for (const auto& tet : t.tetrahedra) {
        mpq_class m[3][3];
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k)
                m[r][k] = q(P[tet[static_cast<std::size_t>(r + 1)]][k]) - q(P[tet[0]][k]);
        const mpq_class det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                              m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                              m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        total += abs(det);
    }
    return total;
}

/// Betti numbers over Z/2 of the complex restricted to simplices with value
/// <= threshold, by ranks of dense boundary matrices.
inline std::array<long, 4> betti(const tpms::FilteredComplex& c, double threshold)
{
    std::array<std::vector<std::array<tpms::VertexId, 4>>, 4> by_dim;
    for (const auto& s : c.simplices)
        if (s.value <= threshold)
            by_dim[static_cast<std::size_t>(s.dim)].push_back(s.v);
    std::array<std::map<std::array<tpms::VertexId, 4>, std::size_t>, 4> pos;
    for (int d = 0; d < 4; ++d)
        for (std::size_t i = 0; i < by_dim[d].size(); ++i)
            pos[d][by_dim[d][i]] = i;

    auto rank_of = [&](int d) -> long {
        // boundary map C_d -> C_{d-1}, rows = d-simplices as bit vectors.
        if (d == 0 || by_dim[d].empty())
            return 0;
        const std::size_t cols = by_dim[d - 1].size();
        std::vector<std::vector<bool>> rows;
        for (const auto& s : by_dim[d]) {
            std::vector<bool> r(cols, false);
            for (int drop = 0; drop <= d; ++drop) {
                std::array<tpms::VertexId, 4> f{tpms::kNoVertex, tpms::kNoVertex, tpms::kNoVertex, tpms::kNoVertex};
                int w = 0;
                for (int k = 0; k <= d; ++k)
                    if (k != drop)
                        f[w++] = s[k];
                r[pos[d - 1].at(f)] = true;
            }
            rows.push_back(std::move(r));
        }
        long rank = 0;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols && row < rows.size(); ++col) {
            std::size_t piv = row;
            while (piv < rows.size() && !rows[piv][col])
                ++piv;
            if (piv == rows.size())
                continue;
            std::swap(rows[piv], rows[row]);
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (r != row && rows[r][col])
                    for (std::size_t k = col; k < cols; ++k)
                        rows[r][k] = rows[r][k] != rows[row][k];
            ++row;
            ++rank;
        }
        return rank;
    };

    std::array<long, 5> rk{};
    for (int d = 0; d < 4; ++d)
        rk[static_cast<std::size_t>(d)] = rank_of(d);
    rk[4] = 0;
    std::array<long, 4> b{};
    for (int d = 0; d < 4; ++d)
        b[static_cast<std::size_t>(d)] =
            static_cast<long>(by_dim[d].size()) - rk[static_cast<std::size_t>(d)] - rk[static_cast<std::size_t>(d) + 1];
    return b;
}

} // namespace oracle

#endif // TPMS_TESTS_ORACLES_HPP
