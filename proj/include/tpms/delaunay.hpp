#ifndef TPMS_DELAUNAY_HPP
#define TPMS_DELAUNAY_HPP

// Incremental 3D Delaunay triangulation (Bowyer-Watson).
//
// The convex hull is closed with a vertex at infinity: every hull facet
// (a, b, c) has an infinite cell (a, b, c, inf) on its outer side, so point
// location and cavity growth never need a bounding super-tetrahedron.
//
// Degenerate configurations (five cospherical points) are decided by a
// symbolic perturbation of the lifted coordinates keyed on the input index:
// a higher index means a larger perturbation. The perturbed triangulation is
// unique, so the output does not depend on the insertion order.

#include "tpms/filtered_complex.hpp"
#include "tpms/point_cloud.hpp"
#include "tpms/predicates.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tpms {

class DelaunayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite tetrahedra of the Delaunay triangulation. Each tetrahedron has
/// ascending first vertex order up to one swap that keeps
/// orient3d(v0, v1, v2, v3) > 0. adjacency[t][i] is the tetrahedron across
/// the facet opposite v[i], or -1 on the hull.
struct Tetrahedralization {
    PointCloud vertices;
    std::vector<std::array<VertexId, 4>> tetrahedra;
    std::vector<std::array<std::int64_t, 4>> adjacency;
};

namespace detail {

inline constexpr VertexId kInfinite = kNoVertex - 1;
inline constexpr std::uint32_t kNoCell = std::numeric_limits<std::uint32_t>::max();

/// Biased randomized insertion order: a seeded shuffle split into rounds of
/// doubling size, each round sorted along a Morton curve.
inline std::vector<VertexId> brio_order(const PointCloud& cloud, std::uint64_t seed)
{
    const std::size_t n = cloud.size();
    std::vector<VertexId> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = static_cast<VertexId>(i);
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }

    Vec3 lo = cloud[0], hi = cloud[0];
    for (const auto& p : cloud.points)
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    auto spread = [](std::uint64_t x) {
        x &= 0x1fffff;
        x = (x | x << 32) & 0x1f00000000ffffull;
        x = (x | x << 16) & 0x1f0000ff0000ffull;
        x = (x | x << 8) & 0x100f00f00f00f00full;
        x = (x | x << 4) & 0x10c30c30c30c30c3ull;
        x = (x | x << 2) & 0x1249249249249249ull;
        return x;
    };
    std::vector<std::uint64_t> code(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t c = 0;
        for (int a = 0; a < 3; ++a) {
            const double ext = hi[a] - lo[a];
            const double t = ext > 0.0 ? (cloud[i][a] - lo[a]) / ext : 0.0;
            const auto q = static_cast<std::uint64_t>(std::clamp(t, 0.0, 1.0) * 2097151.0);
            c |= spread(q) << a;
        }
        code[i] = c;
    }

    std::vector<std::size_t> bounds{n};
    for (std::size_t end = n; end > 64; end /= 2)
        bounds.push_back(end / 2);
    bounds.push_back(0);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    for (std::size_t r = 0; r + 1 < bounds.size(); ++r)
        std::sort(order.begin() + static_cast<std::ptrdiff_t>(bounds[r]),
                  order.begin() + static_cast<std::ptrdiff_t>(bounds[r + 1]), [&](VertexId a, VertexId b) {
                      return code[a] != code[b] ? code[a] < code[b] : a < b;
                  });
    return order;
}

class DelaunayBuilder {
public:
    DelaunayBuilder(const PointCloud& cloud, std::uint64_t seed) : pts_(cloud), seed_(seed) {}

    Tetrahedralization run()
    {
        validate(pts_);
        if (pts_.size() < 4)
            throw DelaunayError("degenerate input: fewer than 4 points");
        auto order = brio_order(pts_, seed_);
        walk_state_ = seed_ ^ 0x2545f4914f6cdd1dull;
        init(order);
        for (VertexId p : order)
            if (!used_[p])
                insert(p);
        return extract();
    }

private:
    struct Cell {
        std::array<VertexId, 4> v;
        std::array<std::uint32_t, 4> n;
    };

    const PointCloud& pts_;
    std::uint64_t seed_;
    std::vector<Cell> cells_;
    std::vector<char> alive_;
    std::vector<std::uint32_t> free_;
    std::vector<char> used_;
    std::vector<std::uint32_t> cavity_stamp_;
    std::vector<std::uint32_t> tested_stamp_;
    std::vector<char> tested_result_;
    std::uint32_t stamp_ = 0;
    std::uint32_t hint_ = 0;
    std::uint64_t walk_state_ = 0;

    const Vec3& P(VertexId v) const { return pts_.points[v]; }

    static int infinite_slot(const Cell& c)
    {
        for (int i = 0; i < 4; ++i)
            if (c.v[i] == kInfinite)
                return i;
        return -1;
    }

    /// orient3d of the cell with slot i replaced by point q.
    int orient_with(const Cell& c, int i, VertexId q) const
    {
        Vec3 x[4];
        for (int k = 0; k < 4; ++k)
            x[k] = (k == i) ? P(q) : P(c.v[k]);
        return predicates::orient3d(x[0], x[1], x[2], x[3]);
    }

    /// In-sphere test for a positively oriented finite cell with symbolic
    /// perturbation; > 0 means q is in conflict.
    int insphere_sos(const Cell& c, VertexId q) const
    {
        const int s = predicates::insphere(P(c.v[0]), P(c.v[1]), P(c.v[2]), P(c.v[3]), P(q));
        if (s != 0)
            return s;
        std::array<int, 5> slots{0, 1, 2, 3, 4};
        auto id = [&](int slot) { return slot == 4 ? q : c.v[slot]; };
        std::sort(slots.begin(), slots.end(), [&](int a, int b) { return id(a) > id(b); });
        for (int slot : slots) {
            if (slot == 4)
                return -1;
            const int o = orient_with(c, slot, q);
            if (o != 0)
                return o;
        }
        throw std::logic_error("symbolic perturbation failed to resolve a degenerate in-sphere test");
    }

    bool conflict(std::uint32_t ci, VertexId q) const
    {
        const Cell& c = cells_[ci];
        const int s = infinite_slot(c);
        if (s < 0)
            return insphere_sos(c, q) > 0;
        const int o = orient_with(c, s, q);
        if (o != 0)
            return o > 0;
        return insphere_sos(cells_[c.n[s]], q) > 0;
    }

    std::uint32_t new_cell(const Cell& c)
    {
        std::uint32_t id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
            cells_[id] = c;
            alive_[id] = 1;
        } else {
            id = static_cast<std::uint32_t>(cells_.size());
            cells_.push_back(c);
            alive_.push_back(1);
            cavity_stamp_.push_back(0);
            tested_stamp_.push_back(0);
            tested_result_.push_back(0);
        }
        return id;
    }

    void init(const std::vector<VertexId>& order)
    {
        used_.assign(pts_.size(), 0);
        std::array<VertexId, 4> s{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
        int found = 0;
        for (VertexId p : order) {
            if (found == 0) {
                s[found++] = p;
            } else if (found == 1) {
                if (!(P(p) == P(s[0])))
                    s[found++] = p;
            } else if (found == 2) {
                if (!predicates::collinear(P(s[0]), P(s[1]), P(p)))
                    s[found++] = p;
            } else if (predicates::orient3d(P(s[0]), P(s[1]), P(s[2]), P(p)) != 0) {
                s[found++] = p;
                break;
            }
        }
        if (found < 4)
            throw DelaunayError("degenerate input: all points are coplanar");
        if (predicates::orient3d(P(s[0]), P(s[1]), P(s[2]), P(s[3])) < 0)
            std::swap(s[0], s[1]);
        for (VertexId v : s)
            used_[v] = 1;

        std::vector<Cell> init_cells;
        init_cells.push_back({s, {kNoCell, kNoCell, kNoCell, kNoCell}});
        for (int i = 0; i < 4; ++i) {
            Cell g{s, {kNoCell, kNoCell, kNoCell, kNoCell}};
            g.v[i] = kInfinite;
            const int a = (i + 1) % 4, b = (i + 2) % 4;
            std::swap(g.v[a], g.v[b]);
            init_cells.push_back(g);
        }
        for (const auto& c : init_cells)
            new_cell(c);
        link_all_faces();
        hint_ = 0;
    }

    /// Neighbour links by brute-force facet matching; used for the initial
    /// five cells only.
    void link_all_faces()
    {
        std::unordered_map<std::array<VertexId, 4>, std::pair<std::uint32_t, int>, SimplexKeyHash> open;
        for (std::uint32_t ci = 0; ci < cells_.size(); ++ci)
            for (int i = 0; i < 4; ++i) {
                std::array<VertexId, 4> key{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
                int w = 0;
                for (int k = 0; k < 4; ++k)
                    if (k != i)
                        key[w++] = cells_[ci].v[k];
                std::sort(key.begin(), key.begin() + 3);
                auto it = open.find(key);
                if (it == open.end()) {
                    open.emplace(key, std::make_pair(ci, i));
                } else {
                    cells_[ci].n[i] = it->second.first;
                    cells_[it->second.first].n[it->second.second] = ci;
                    open.erase(it);
                }
            }
        if (!open.empty())
            throw std::logic_error("initial triangulation is not closed");
    }

    std::uint64_t next_random()
    {
        walk_state_ ^= walk_state_ << 13;
        walk_state_ ^= walk_state_ >> 7;
        walk_state_ ^= walk_state_ << 17;
        return walk_state_;
    }

    /// Visibility walk from the hint. Returns a cell in conflict with q: a
    /// finite cell containing q, or an infinite cell whose hull facet sees q.
    std::uint32_t locate(VertexId q)
    {
        std::uint32_t c = hint_;
        if (!alive_[c] || infinite_slot(cells_[c]) >= 0) {
            for (c = 0; c < cells_.size(); ++c)
                if (alive_[c] && infinite_slot(cells_[c]) < 0)
                    break;
        }
        const std::size_t max_steps = 4 * cells_.size() + 64;
        for (std::size_t step = 0; step < max_steps; ++step) {
            const Cell& cell = cells_[c];
            if (infinite_slot(cell) >= 0)
                return c;
            const int start = static_cast<int>(next_random() & 3);
            bool moved = false;
            for (int t = 0; t < 4; ++t) {
                const int i = (start + t) & 3;
                if (orient_with(cell, i, q) < 0) {
                    c = cell.n[i];
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                for (VertexId v : cell.v)
                    if (P(v) == P(q))
                        throw DelaunayError("duplicate point");
                return c;
            }
        }
        for (std::uint32_t ci = 0; ci < cells_.size(); ++ci)
            if (alive_[ci] && conflict(ci, q))
                return ci;
        throw std::logic_error("point location failed");
    }

    void insert(VertexId q)
    {
        const std::uint32_t start = locate(q);
        if (!conflict(start, q))
            throw std::logic_error("located cell is not in conflict");

        if (++stamp_ == 0) {
            std::fill(cavity_stamp_.begin(), cavity_stamp_.end(), 0);
            std::fill(tested_stamp_.begin(), tested_stamp_.end(), 0);
            stamp_ = 1;
        }

        std::vector<std::uint32_t> cavity{start};
        std::vector<std::pair<std::uint32_t, int>> boundary;
        cavity_stamp_[start] = stamp_;
        for (std::size_t head = 0; head < cavity.size(); ++head) {
            const std::uint32_t c = cavity[head];
            for (int i = 0; i < 4; ++i) {
                const std::uint32_t nb = cells_[c].n[i];
                if (cavity_stamp_[nb] == stamp_)
                    continue;
                bool in_conflict;
                if (tested_stamp_[nb] == stamp_) {
                    in_conflict = tested_result_[nb] != 0;
                } else {
                    in_conflict = conflict(nb, q);
                    tested_stamp_[nb] = stamp_;
                    tested_result_[nb] = in_conflict ? 1 : 0;
                }
                if (in_conflict) {
                    cavity_stamp_[nb] = stamp_;
                    cavity.push_back(nb);
                } else {
                    boundary.emplace_back(c, i);
                }
            }
        }

        // Facets through q pair up along the edge they share with the cavity
        // boundary.
        std::unordered_map<std::uint64_t, std::pair<std::uint32_t, int>> open;
        open.reserve(boundary.size() * 2);
        std::uint32_t finite_new = kNoCell;
        for (const auto& [c, i] : boundary) {
            Cell nc = cells_[c];
            nc.v[i] = q;
            const std::uint32_t outside = nc.n[i];
            nc.n = {kNoCell, kNoCell, kNoCell, kNoCell};
            nc.n[i] = outside;
            const std::uint32_t id = new_cell(nc);
            Cell& out = cells_[outside];
            for (int k = 0; k < 4; ++k)
                if (out.n[k] == c) {
                    out.n[k] = id;
                    break;
                }
            if (finite_new == kNoCell && infinite_slot(cells_[id]) < 0)
                finite_new = id;
            for (int j = 0; j < 4; ++j) {
                if (j == i)
                    continue;
                VertexId e[2];
                int w = 0;
                for (int k = 0; k < 4; ++k)
                    if (k != i && k != j)
                        e[w++] = cells_[id].v[k];
                const std::uint64_t key = (static_cast<std::uint64_t>(std::min(e[0], e[1])) << 32) |
                                          static_cast<std::uint64_t>(std::max(e[0], e[1]));
                auto it = open.find(key);
                if (it == open.end()) {
                    open.emplace(key, std::make_pair(id, j));
                } else {
                    cells_[id].n[j] = it->second.first;
                    cells_[it->second.first].n[it->second.second] = id;
                    open.erase(it);
                }
            }
        }
        if (!open.empty())
            throw std::logic_error("cavity boundary is not a closed surface");

        for (std::uint32_t c : cavity) {
            alive_[c] = 0;
            free_.push_back(c);
        }
        used_[q] = 1;
        if (finite_new != kNoCell)
            hint_ = finite_new;
    }

    Tetrahedralization extract() const
    {
        Tetrahedralization t;
        t.vertices = pts_;
        for (std::uint32_t c = 0; c < cells_.size(); ++c) {
            if (!alive_[c] || infinite_slot(cells_[c]) >= 0)
                continue;
            auto v = cells_[c].v;
            // Sort ascending tracking permutation parity; an odd parity is
            // undone by swapping the last two so the orientation is kept.
            bool odd = false;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j + 1 < 4 - i; ++j)
                    if (v[j] > v[j + 1]) {
                        std::swap(v[j], v[j + 1]);
                        odd = !odd;
                    }
            if (odd)
                std::swap(v[2], v[3]);
            t.tetrahedra.push_back(v);
        }
        std::sort(t.tetrahedra.begin(), t.tetrahedra.end());

        t.adjacency.assign(t.tetrahedra.size(), {-1, -1, -1, -1});
        std::unordered_map<std::array<VertexId, 4>, std::pair<std::int64_t, int>, SimplexKeyHash> open;
        open.reserve(t.tetrahedra.size() * 3);
        for (std::size_t ti = 0; ti < t.tetrahedra.size(); ++ti)
            for (int i = 0; i < 4; ++i) {
                std::array<VertexId, 4> key{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
                int w = 0;
                for (int k = 0; k < 4; ++k)
                    if (k != i)
                        key[w++] = t.tetrahedra[ti][k];
                std::sort(key.begin(), key.begin() + 3);
                auto it = open.find(key);
                if (it == open.end()) {
                    open.emplace(key, std::make_pair(static_cast<std::int64_t>(ti), i));
                } else {
                    t.adjacency[ti][i] = it->second.first;
                    t.adjacency[static_cast<std::size_t>(it->second.first)][it->second.second] =
                        static_cast<std::int64_t>(ti);
                    open.erase(it);
                }
            }
        return t;
    }
};

} // namespace detail

/// Delaunay tetrahedralization of the cloud. `seed` only drives the
/// insertion order; the result is identical for every seed.
inline Tetrahedralization delaunay3(const PointCloud& cloud, std::uint64_t seed = 0x5eed)
{
    return detail::DelaunayBuilder(cloud, seed).run();
}

/// CSV dump `v0,v1,v2,v3`, one tetrahedron per row.
inline std::string format_tetrahedra(const Tetrahedralization& t)
{
    std::string out = "v0,v1,v2,v3\n";
    for (const auto& tet : t.tetrahedra)
        out += std::to_string(tet[0]) + ',' + std::to_string(tet[1]) + ',' + std::to_string(tet[2]) + ',' +
               std::to_string(tet[3]) + '\n';
    return out;
}

} // namespace tpms

#endif // TPMS_DELAUNAY_HPP
