#include "support/oracles.hpp"
#include "tpms/delaunay.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace tpms;

namespace {

PointCloud cube_corners(double h = 1.0)
{
    PointCloud c;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
                c.points.push_back({h * i, h * j, h * k});
    return c;
}

PointCloud lattice(int n, double h)
{
    PointCloud c;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                c.points.push_back({h * i, h * j, h * k});
    return c;
}

/// Every interior facet is shared by exactly two tetrahedra and the
/// adjacency table agrees with that sharing.
void expect_consistent_adjacency(const Tetrahedralization& t)
{
    ASSERT_EQ(t.adjacency.size(), t.tetrahedra.size());
    for (std::size_t a = 0; a < t.tetrahedra.size(); ++a)
        for (int i = 0; i < 4; ++i) {
            const auto nb = t.adjacency[a][i];
            if (nb < 0)
                continue;
            const auto& ta = t.tetrahedra[a];
            const auto& tb = t.tetrahedra[static_cast<std::size_t>(nb)];
            int shared = 0;
            for (int k = 0; k < 4; ++k)
                if (k != i && std::find(tb.begin(), tb.end(), ta[k]) != tb.end())
                    ++shared;
            EXPECT_EQ(shared, 3);
            EXPECT_EQ(std::find(tb.begin(), tb.end(), ta[i]), tb.end());
        }
}

long euler(const Tetrahedralization& t)
{
    std::set<std::array<VertexId, 3>> tris;
    std::set<std::array<VertexId, 2>> edges;
    std::set<VertexId> verts;
    for (auto tet : t.tetrahedra) {
        std::sort(tet.begin(), tet.end());
        for (int i = 0; i < 4; ++i) {
            verts.insert(tet[i]);
            for (int j = i + 1; j < 4; ++j) {
                edges.insert({tet[i], tet[j]});
                for (int k = j + 1; k < 4; ++k)
                    tris.insert({tet[i], tet[j], tet[k]});
            }
        }
    }
    return static_cast<long>(verts.size()) - static_cast<long>(edges.size()) + static_cast<long>(tris.size()) -
           static_cast<long>(t.tetrahedra.size());
}

} // namespace

TEST(Delaunay, FourPointsOneTetrahedron)
{
    const PointCloud c{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto t = delaunay3(c);
    ASSERT_EQ(t.tetrahedra.size(), 1u);
    EXPECT_EQ(oracle::delaunay_violations(t), 0u);
    EXPECT_EQ(t.adjacency[0], (std::array<std::int64_t, 4>{-1, -1, -1, -1}));
}

TEST(Delaunay, CubeCorners)
{
    const auto t = delaunay3(cube_corners());
    EXPECT_TRUE(t.tetrahedra.size() == 5 || t.tetrahedra.size() == 6) << t.tetrahedra.size();
    EXPECT_EQ(oracle::delaunay_violations(t), 0u);
    EXPECT_EQ(oracle::six_volume(t), 6);
    expect_consistent_adjacency(t);
}

TEST(Delaunay, RandomBallsAudit)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = delaunay3(oracle::random_ball(50, seed));
        EXPECT_EQ(oracle::delaunay_violations(t), 0u) << "seed " << seed;
        expect_consistent_adjacency(t);
        EXPECT_EQ(euler(t), 1);
    }
}

TEST(Delaunay, CubicLatticeIsDegenerateButValid)
{
    const auto t = delaunay3(lattice(5, 0.25));
    EXPECT_EQ(oracle::delaunay_violations(t), 0u);
    EXPECT_EQ(oracle::six_volume(t), 6);
    expect_consistent_adjacency(t);
    EXPECT_EQ(euler(t), 1);
}

TEST(Delaunay, SphereSamplesAudit)
{
    const auto t = delaunay3(oracle::sphere(200));
    EXPECT_EQ(oracle::delaunay_violations(t), 0u);
    EXPECT_EQ(euler(t), 1);
}

TEST(Delaunay, IsosurfacePointsAudit)
{
    FieldSpec s;
    s.family = Family::Gyroid;
    const PointCloud c = subsample_fps(extract_isosurface_points(sample_grid(s, {12, 12, 12})), 250);
    const auto t = delaunay3(c);
    EXPECT_EQ(oracle::delaunay_violations(t), 0u);
    expect_consistent_adjacency(t);
    EXPECT_EQ(euler(t), 1);
}

TEST(Delaunay, IndependentOfInsertionSeed)
{
    for (const PointCloud& c : {oracle::random_ball(120, 3), lattice(4, 1.0), cube_corners(0.5)}) {
        const auto a = delaunay3(c, 1);
        const auto b = delaunay3(c, 99);
        const auto again = delaunay3(c, 1);
        EXPECT_EQ(a.tetrahedra, b.tetrahedra);
        EXPECT_EQ(a.tetrahedra, again.tetrahedra);
        EXPECT_EQ(a.adjacency, again.adjacency);
    }
}

TEST(Delaunay, HullVolumeOfRandomCube)
{
    // The corners of the unit cube plus interior points: the hull is the cube.
    PointCloud c = cube_corners();
    const PointCloud inner = oracle::random_cube(200, 8);
    c.points.insert(c.points.end(), inner.points.begin(), inner.points.end());
    const auto t = delaunay3(c);
    EXPECT_EQ(oracle::six_volume(t), 6);
    EXPECT_EQ(oracle::delaunay_violations(t), 0u);
}

TEST(Delaunay, DegenerateInputs)
{
    EXPECT_THROW(delaunay3(PointCloud{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}}), DelaunayError);
    EXPECT_THROW(delaunay3(PointCloud{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}}}), DelaunayError);
    EXPECT_THROW(delaunay3(PointCloud{{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}}}), DelaunayError);
    EXPECT_THROW(delaunay3(PointCloud{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}),
                 std::invalid_argument);
}

TEST(Delaunay, TetrahedraCsv)
{
    const auto t = delaunay3(PointCloud{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
    const std::string csv = format_tetrahedra(t);
    EXPECT_EQ(csv.substr(0, 12), "v0,v1,v2,v3\n");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}
