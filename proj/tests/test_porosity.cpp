#include "tpms/fixtures.hpp"
#include "tpms/porosity.hpp"

#include <gtest/gtest.h>

using namespace tpms;

namespace {

PorosityResult run(Family f, double d, std::size_t n, SolidSide side = SolidSide::Negative)
{
    FieldSpec s;
    s.family = f;
    s.d = d;
    return voxel_porosity(sample_grid(s, {n, n, n}, 4), side);
}

} // namespace

TEST(VoxelPorosity, SchwarzAllPositive)
{
    for (std::size_t n : {8u, 17u, 32u}) {
        const auto r = run(Family::SchwarzP, 4.0, n);
        EXPECT_EQ(r.fraction_negative, 0.0);
        EXPECT_EQ(r.vp, 1.0);
        EXPECT_EQ(r.resolution, (Dims{n, n, n}));
    }
}

TEST(VoxelPorosity, GyroidHalfAtZero)
{
    EXPECT_NEAR(run(Family::Gyroid, 0.0, 128).fraction_negative, 0.5, 0.005);
}

TEST(VoxelPorosity, SchwarzHalfAtZero)
{
    EXPECT_NEAR(run(Family::SchwarzP, 0.0, 128).fraction_negative, 0.5, 0.005);
}

TEST(VoxelPorosity, SchwarzConvergence)
{
    const double a = run(Family::SchwarzP, -0.35, 64).fraction_negative;
    const double b = run(Family::SchwarzP, -0.35, 128).fraction_negative;
    EXPECT_LE(std::abs(a - b), 0.01);
}

TEST(VoxelPorosity, ZeroNodesSplitEvenly)
{
    Grid3 g;
    g.dims = {2, 1, 1};
    g.spacing = {1, 1, 1};
    g.values = {0.0, -1.0};
    const auto r = voxel_porosity(g, SolidSide::Positive);
    EXPECT_DOUBLE_EQ(r.fraction_negative, 0.75);
    EXPECT_DOUBLE_EQ(r.fraction_positive, 0.25);
    EXPECT_DOUBLE_EQ(r.vp, 0.75);
}

TEST(VoxelPorosity, MonotoneInShapeFactorAndComplementary)
{
    for (Family f : {Family::SchwarzP, Family::Gyroid}) {
        double prev = 1.0;
        for (const auto& row : fixtures::kPorosityTable) {
            const auto neg = run(f, row.d, 40, SolidSide::Negative);
            const auto pos = run(f, row.d, 40, SolidSide::Positive);
            EXPECT_LE(neg.fraction_negative, prev);
            prev = neg.fraction_negative;
            EXPECT_LE(neg.fraction_negative + neg.fraction_positive, 1.0 + 1e-12);
            EXPECT_NEAR(neg.vp + pos.vp, 1.0, 1e-12);
        }
    }
}

TEST(PorosityFromVolumes, Examples)
{
    EXPECT_DOUBLE_EQ(porosity_from_volumes(1.0, 0.3), 0.7);
    EXPECT_EQ(porosity_from_volumes(2.5, 0.0), 1.0);
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    EXPECT_DOUBLE_EQ(porosity_from_volumes(8 * pi3, 4 * pi3), 0.5);
}

TEST(PorosityFromVolumes, Errors)
{
    EXPECT_THROW(porosity_from_volumes(1.0, 1.5), std::invalid_argument);
    EXPECT_THROW(porosity_from_volumes(0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(porosity_from_volumes(1.0, -0.1), std::invalid_argument);
}
