#ifndef TPMS_POINT_CLOUD_HPP
#define TPMS_POINT_CLOUD_HPP

#include "tpms/geometry.hpp"
#include "tpms/io.hpp"
#include "tpms/surface_field.hpp"

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace tpms {

struct PointCloud {
    std::vector<Vec3> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const Vec3& operator[](std::size_t i) const { return points[i]; }
    friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

namespace detail {

struct PointBitsHash {
    std::size_t operator()(const Vec3& p) const
    {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (double c : {p.x, p.y, p.z}) {
            h ^= std::bit_cast<std::uint64_t>(c == 0.0 ? 0.0 : c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

/// Throws std::invalid_argument if a coordinate is non-finite or two points coincide.
inline void validate(const PointCloud& cloud)
{
    std::unordered_set<Vec3, detail::PointBitsHash> seen;
    seen.reserve(cloud.size());
    for (const auto& p : cloud.points) {
        if (!is_finite(p))
            throw std::invalid_argument("point cloud contains a non-finite coordinate");
        if (!seen.insert(p).second)
            throw std::invalid_argument("point cloud contains duplicate points");
    }
}

/// Zero crossings of the sampled field along lattice edges.
///
/// Nodes are visited in x-fastest order; at each node a node with value
/// exactly 0 is emitted first, then the crossings on its +x, +y, +z edges.
/// Points that coincide bit-for-bit with an earlier point are skipped, which
/// only happens when interpolation rounds onto an endpoint.
inline PointCloud extract_isosurface_points(const Grid3& grid)
{
    grid.validate();
    PointCloud out;
    std::unordered_set<Vec3, detail::PointBitsHash> seen;
    auto emit = [&](Vec3 p) {
        if (seen.insert(p).second)
            out.points.push_back(p);
    };

    const auto& dm = grid.dims;
    for (std::size_t k = 0; k < dm.nz; ++k)
        for (std::size_t j = 0; j < dm.ny; ++j)
            for (std::size_t i = 0; i < dm.nx; ++i) {
                const double v0 = grid.at(i, j, k);
                const Vec3 p0 = grid.node(i, j, k);
                if (v0 == 0.0)
                    emit(p0);
                const std::size_t ii[3] = {i + 1, i, i};
                const std::size_t jj[3] = {j, j + 1, j};
                const std::size_t kk[3] = {k, k, k + 1};
                for (int axis = 0; axis < 3; ++axis) {
                    if (ii[axis] >= dm.nx || jj[axis] >= dm.ny || kk[axis] >= dm.nz)
                        continue;
                    const double v1 = grid.at(ii[axis], jj[axis], kk[axis]);
                    if ((v0 < 0.0 && v1 > 0.0) || (v0 > 0.0 && v1 < 0.0)) {
                        const Vec3 p1 = grid.node(ii[axis], jj[axis], kk[axis]);
                        const double t = v0 / (v0 - v1);
                        Vec3 q = p0;
                        q[axis] = p0[axis] + t * (p1[axis] - p0[axis]);
                        emit(q);
                    }
                }
            }
    return out;
}

/// Greedy farthest-point sampling seeded at point 0; ties go to the lowest
/// index. Output is in selection order, so the result for n is a prefix of
/// the result for n + 1 while n + 1 < |cloud|. Returns the cloud unchanged
/// when n >= |cloud|.
inline PointCloud subsample_fps(const PointCloud& cloud, std::size_t n)
{
    if (cloud.empty())
        throw std::invalid_argument("subsample_fps: empty cloud");
    if (n < 1)
        throw std::invalid_argument("subsample_fps: n must be >= 1");
    if (n >= cloud.size())
        return cloud;

    const std::size_t m = cloud.size();
    std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
    PointCloud out;
    out.points.reserve(n);
    std::size_t current = 0;
    for (std::size_t s = 0; s < n; ++s) {
        out.points.push_back(cloud[current]);
        const Vec3 c = cloud[current];
        std::size_t best = 0;
        double best_d = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d2 = distance2(cloud[i], c);
            if (d2 < nearest[i])
                nearest[i] = d2;
            if (nearest[i] > best_d) {
                best_d = nearest[i];
                best = i;
            }
        }
        current = best;
    }
    return out;
}

// CSV with header `x,y,z`.

inline std::string format_points(const PointCloud& cloud)
{
    std::string out = "x,y,z\n";
    out.reserve(cloud.size() * 64 + 8);
    for (const auto& p : cloud.points) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += ',';
        out += format_double(p.z);
        out += '\n';
    }
    return out;
}

inline PointCloud parse_points(std::string_view text)
{
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "x,y,z")
        throw ParseError("points: expected header 'x,y,z'");
    PointCloud cloud;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (trim(lines[n]).empty())
            continue;
        const auto cells = split(trim(lines[n]), ',');
        if (cells.size() != 3)
            throw ParseError("points: row " + std::to_string(n) + " must have 3 fields");
        cloud.points.push_back({parse_finite(cells[0]), parse_finite(cells[1]), parse_finite(cells[2])});
    }
    return cloud;
}

inline void write_points(const std::filesystem::path& path, const PointCloud& cloud)
{
    write_file_atomic(path, format_points(cloud));
}

inline PointCloud read_points(const std::filesystem::path& path) { return parse_points(read_text_file(path)); }

} // namespace tpms

#endif // TPMS_POINT_CLOUD_HPP
