#ifndef TPMS_ALPHA_HPP
#define TPMS_ALPHA_HPP

// Alpha-complex filtration over the full Delaunay complex. Values are squared
// radii: a tetrahedron enters at its squared circumradius; a lower simplex
// enters at the squared radius of its smallest circumscribing ball when that
// ball holds no other input point, and otherwise together with its earliest
// cofacet.

#include "tpms/delaunay.hpp"
#include "tpms/filtered_complex.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tpms {

/// Centre and squared radius of the smallest ball through the given points.
struct Ball {
    Vec3 center;
    double radius2 = 0.0;
};

inline Ball smallest_ball(Vec3 a, Vec3 b)
{
    return {0.5 * (a + b), 0.25 * distance2(a, b)};
}

namespace detail {

struct QVec {
    mpq_class x, y, z;
};

inline QVec qsub(Vec3 a, Vec3 b) { return {mpq_class(a.x) - b.x, mpq_class(a.y) - b.y, mpq_class(a.z) - b.z}; }
inline mpq_class qdot(const QVec& a, const QVec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline QVec qcross(const QVec& a, const QVec& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline QVec qcombine(const mpq_class& s1, const QVec& v1, const mpq_class& s2, const QVec& v2)
{
    return {s1 * v1.x + s2 * v2.x, s1 * v1.y + s2 * v2.y, s1 * v1.z + s2 * v2.z};
}

inline Ball to_ball(Vec3 a, const QVec& off)
{
    return {a + Vec3{off.x.get_d(), off.y.get_d(), off.z.get_d()}, mpq_class(qdot(off, off)).get_d()};
}

// Nearly degenerate triangles and tetrahedra (points that are cocircular or
// coplanar up to rounding) lose all precision in the floating-point formula,
// so their balls are recomputed exactly.
inline constexpr double kIllConditioned = 1e-8;

inline Ball exact_ball(Vec3 a, Vec3 b, Vec3 c)
{
    const QVec u = qsub(b, a), v = qsub(c, a);
    const QVec n = qcross(u, v);
    const mpq_class nn = qdot(n, n);
    if (sgn(nn) == 0)
        throw std::domain_error("smallest_ball: collinear points");
    const QVec s = qcombine(qdot(u, u), qcross(v, n), qdot(v, v), qcross(n, u));
    const mpq_class k = 2 * nn;
    return to_ball(a, {s.x / k, s.y / k, s.z / k});
}

inline Ball exact_ball(Vec3 a, Vec3 b, Vec3 c, Vec3 d)
{
    const QVec u = qsub(b, a), v = qsub(c, a), w = qsub(d, a);
    const QVec vw = qcross(v, w);
    const mpq_class denom = 2 * qdot(u, vw);
    if (sgn(denom) == 0)
        throw std::domain_error("smallest_ball: coplanar points");
    QVec s = qcombine(qdot(u, u), vw, qdot(v, v), qcross(w, u));
    s = qcombine(1, s, qdot(w, w), qcross(u, v));
    return to_ball(a, {s.x / denom, s.y / denom, s.z / denom});
}

} // namespace detail

inline Ball smallest_ball(Vec3 a, Vec3 b, Vec3 c)
{
    const Vec3 u = b - a;
    const Vec3 v = c - a;
    const Vec3 n = cross(u, v);
    const double nn = norm2(n);
    if (!(nn > detail::kIllConditioned * norm2(u) * norm2(v)))
        return detail::exact_ball(a, b, c);
    const Vec3 off = (norm2(u) * cross(v, n) + norm2(v) * cross(n, u)) / (2.0 * nn);
    return {a + off, norm2(off)};
}

/// Circumscribed ball of a tetrahedron.
inline Ball smallest_ball(Vec3 a, Vec3 b, Vec3 c, Vec3 d)
{
    const Vec3 u = b - a;
    const Vec3 v = c - a;
    const Vec3 w = d - a;
    const double denom = 2.0 * dot(u, cross(v, w));
    if (!(std::abs(denom) > detail::kIllConditioned * norm(u) * norm(v) * norm(w)))
        return detail::exact_ball(a, b, c, d);
    const Vec3 off = (norm2(u) * cross(v, w) + norm2(v) * cross(w, u) + norm2(w) * cross(u, v)) / denom;
    return {a + off, norm2(off)};
}

namespace detail {

struct FaceTable {
    std::vector<std::array<VertexId, 4>> keys;
    // For each face: (cofacet index, vertex of the cofacet not in the face).
    std::vector<std::vector<std::pair<std::uint32_t, VertexId>>> cofacets;
    SimplexIndex index;

    std::uint32_t add(const std::array<VertexId, 4>& key, std::uint32_t cofacet, VertexId opposite)
    {
        auto [it, inserted] = index.emplace(key, static_cast<std::uint32_t>(keys.size()));
        if (inserted) {
            keys.push_back(key);
            cofacets.emplace_back();
        }
        cofacets[it->second].emplace_back(cofacet, opposite);
        return it->second;
    }
};

inline FaceTable facets_of(const std::vector<std::array<VertexId, 4>>& cells, int cell_dim)
{
    FaceTable t;
    t.index.reserve(cells.size() * 2);
    for (std::uint32_t ci = 0; ci < cells.size(); ++ci) {
        for (int drop = 0; drop <= cell_dim; ++drop) {
            std::array<VertexId, 4> key{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
            int w = 0;
            for (int k = 0; k <= cell_dim; ++k)
                if (k != drop)
                    key[w++] = cells[ci][k];
            std::sort(key.begin(), key.begin() + cell_dim);
            t.add(key, ci, cells[ci][drop]);
        }
    }
    return t;
}

} // namespace detail

inline FilteredComplex build_alpha(const Tetrahedralization& tri)
{
    const auto& P = tri.vertices.points;
    std::vector<std::array<VertexId, 4>> tets;
    tets.reserve(tri.tetrahedra.size());
    for (auto t : tri.tetrahedra) {
        std::sort(t.begin(), t.end());
        tets.push_back(t);
    }

    std::vector<double> tet_value(tets.size());
    for (std::size_t i = 0; i < tets.size(); ++i) {
        const auto& t = tets[i];
        tet_value[i] = smallest_ball(P[t[0]], P[t[1]], P[t[2]], P[t[3]]).radius2;
    }

    // Attached faces take the minimum over their cofacets; unattached ones
    // take their own radius, clamped so rounding never breaks monotonicity.
    auto face_values = [&](const detail::FaceTable& faces, const std::vector<double>& cofacet_value, int dim) {
        std::vector<double> value(faces.keys.size());
        for (std::size_t f = 0; f < faces.keys.size(); ++f) {
            const auto& k = faces.keys[f];
            const Ball ball = dim == 2 ? smallest_ball(P[k[0]], P[k[1]], P[k[2]]) : smallest_ball(P[k[0]], P[k[1]]);
            bool gabriel = true;
            double cofacet_min = std::numeric_limits<double>::infinity();
            for (const auto& [cf, opposite] : faces.cofacets[f]) {
                cofacet_min = std::min(cofacet_min, cofacet_value[cf]);
                if (distance2(P[opposite], ball.center) < ball.radius2)
                    gabriel = false;
            }
            value[f] = gabriel ? std::min(ball.radius2, cofacet_min) : cofacet_min;
        }
        return value;
    };

    const auto triangles = detail::facets_of(tets, 3);
    const auto tri_value = face_values(triangles, tet_value, 2);
    const auto edges = detail::facets_of(triangles.keys, 2);
    const auto edge_value = face_values(edges, tri_value, 1);

    FilteredComplex c;
    c.simplices.reserve(P.size() + edges.keys.size() + triangles.keys.size() + tets.size());
    for (VertexId v = 0; v < P.size(); ++v) {
        const VertexId vv[1] = {v};
        c.simplices.push_back(make_simplex(vv, 0.0));
    }
    for (std::size_t i = 0; i < edges.keys.size(); ++i)
        c.simplices.push_back(make_simplex(std::span(edges.keys[i].data(), 2), edge_value[i]));
    for (std::size_t i = 0; i < triangles.keys.size(); ++i)
        c.simplices.push_back(make_simplex(std::span(triangles.keys[i].data(), 3), tri_value[i]));
    for (std::size_t i = 0; i < tets.size(); ++i)
        c.simplices.push_back(make_simplex(std::span(tets[i].data(), 4), tet_value[i]));
    sort_filtration(c);
    return c;
}

inline FilteredComplex build_alpha(const PointCloud& cloud, std::uint64_t seed = 0x5eed)
{
    return build_alpha(delaunay3(cloud, seed));
}

} // namespace tpms

#endif // TPMS_ALPHA_HPP
