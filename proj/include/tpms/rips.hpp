#ifndef TPMS_RIPS_HPP
#define TPMS_RIPS_HPP

#include "tpms/filtered_complex.hpp"
#include "tpms/point_cloud.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace tpms {

/// Smallest r such that some point reaches every other point within r.
inline double enclosing_radius(const PointCloud& cloud)
{
    if (cloud.empty())
        throw std::invalid_argument("enclosing_radius: empty cloud");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double far = 0.0;
        for (std::size_t j = 0; j < cloud.size(); ++j)
            far = std::max(far, distance(cloud[i], cloud[j]));
        best = std::min(best, far);
    }
    return best;
}

/// Vietoris-Rips filtration: a simplex enters at the largest pairwise
/// distance among its vertices. Simplices above max_radius or max_dim are
/// omitted.
inline FilteredComplex build_rips(const PointCloud& cloud, double max_radius, int max_dim)
{
    if (cloud.empty())
        throw std::invalid_argument("build_rips: empty cloud");
    if (max_dim < 0 || max_dim > 3)
        throw std::invalid_argument("build_rips: max_dim must be in [0, 3]");
    if (!(max_radius > 0.0))
        throw std::invalid_argument("build_rips: max_radius must be positive");

    const std::size_t n = cloud.size();
    constexpr std::size_t kDenseLimit = 4096;
    std::vector<double> dense;
    if (n <= kDenseLimit) {
        dense.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                dense[i * n + j] = distance(cloud[i], cloud[j]);
    }
    auto dist = [&](VertexId i, VertexId j) {
        return dense.empty() ? distance(cloud[i], cloud[j]) : dense[static_cast<std::size_t>(i) * n + j];
    };

    // Higher-indexed neighbours within max_radius, ascending.
    std::vector<std::vector<VertexId>> up(n);
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            if (dist(i, j) <= max_radius)
                up[i].push_back(j);

    FilteredComplex c;
    for (VertexId i = 0; i < n; ++i) {
        const VertexId vi[1] = {i};
        c.simplices.push_back(make_simplex(vi, 0.0));
    }
    std::vector<VertexId> common, common2;
    for (VertexId i = 0; i < n && max_dim >= 1; ++i) {
        for (VertexId j : up[i]) {
            const double dij = dist(i, j);
            const VertexId e[2] = {i, j};
            c.simplices.push_back(make_simplex(e, dij));
            if (max_dim < 2)
                continue;
            common.clear();
            std::set_intersection(up[i].begin(), up[i].end(), up[j].begin(), up[j].end(),
                                  std::back_inserter(common));
            for (VertexId k : common) {
                const double dijk = std::max({dij, dist(i, k), dist(j, k)});
                const VertexId t[3] = {i, j, k};
                c.simplices.push_back(make_simplex(t, dijk));
                if (max_dim < 3)
                    continue;
                common2.clear();
                std::set_intersection(common.begin(), common.end(), up[k].begin(), up[k].end(),
                                      std::back_inserter(common2));
                for (VertexId l : common2) {
                    const double dijkl = std::max({dijk, dist(i, l), dist(j, l), dist(k, l)});
                    const VertexId q[4] = {i, j, k, l};
                    c.simplices.push_back(make_simplex(q, dijkl));
                }
            }
        }
    }
    sort_filtration(c);
    return c;
}

} // namespace tpms

#endif // TPMS_RIPS_HPP
