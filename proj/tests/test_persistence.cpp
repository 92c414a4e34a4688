#include "support/oracles.hpp"
#include "support/random_complex.hpp"
#include "tpms/alpha.hpp"
#include "tpms/persistence.hpp"
#include "tpms/rips.hpp"

#include <gtest/gtest.h>

using namespace tpms;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FilteredComplex from_list(std::initializer_list<std::pair<std::vector<VertexId>, double>> items)
{
    FilteredComplex c;
    for (const auto& [v, value] : items)
        c.simplices.push_back(make_simplex(v, value));
    sort_filtration(c);
    return c;
}

void expect_consistent(const FilteredComplex& c)
{
    const IndexPairing fast = reduce_with_clearing(c);
    const IndexPairing slow = naive_pairing(c);
    EXPECT_EQ(fast.pairs, slow.pairs);
    EXPECT_EQ(fast.essential, slow.essential);
    EXPECT_TRUE(pairing_is_complete(c, fast));
    const PersistenceDiagram d = compute_persistence(c);
    EXPECT_EQ(d, naive_reduce(c));
    EXPECT_EQ(euler_characteristic(c), essential_euler(d));
    for (const auto& p : d.pairs)
        EXPECT_LT(p.birth, p.death);
}

std::vector<double> lifetimes(const PersistenceDiagram& d, int dim)
{
    std::vector<double> out;
    for (const auto& p : d.in_dim(dim))
        out.push_back(p.lifetime());
    std::sort(out.rbegin(), out.rend());
    return out;
}

} // namespace

TEST(Persistence, SingleVertex)
{
    const auto d = compute_persistence(from_list({{{0}, 0.0}}));
    EXPECT_EQ(d.pairs, (std::vector<PersistencePair>{{0, 0.0, kInf}}));
}

TEST(Persistence, TwoVerticesJoined)
{
    const auto c = from_list({{{0}, 0.0}, {{1}, 0.0}, {{0, 1}, 1.0}});
    const auto d = compute_persistence(c);
    EXPECT_EQ(d.pairs, (std::vector<PersistencePair>{{0, 0.0, 1.0}, {0, 0.0, kInf}}));
    expect_consistent(c);
}

TEST(Persistence, RipsSquareHasOneLoop)
{
    const PointCloud sq{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}};
    const auto c = build_rips(sq, 2.0, 2);
    ASSERT_EQ(c.size(), 14u);
    const auto d = compute_persistence(c);
    const auto h1 = d.in_dim(1);
    ASSERT_EQ(h1.size(), 1u);
    EXPECT_EQ(h1[0].birth, 1.0);
    EXPECT_DOUBLE_EQ(h1[0].death, std::sqrt(2.0));
    expect_consistent(c);
}

TEST(Persistence, ZeroLengthPairsKeptInternally)
{
    const auto c = from_list({{{0}, 0.0}, {{1}, 0.0}, {{2}, 0.0}, {{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0}, {{0, 1, 2}, 1.0}});
    const IndexPairing p = reduce_with_clearing(c);
    EXPECT_EQ(p.pairs.size(), 3u);
    const auto d = compute_persistence(c);
    EXPECT_TRUE(d.in_dim(1).empty());
    EXPECT_EQ(d.in_dim(0).size(), 3u);
    expect_consistent(c);
}

TEST(Persistence, RandomComplexesMatchNaive)
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 100; ++t) {
        const auto c = oracle::random_complex(rng);
        ASSERT_LE(c.size(), 50u);
        ASSERT_NO_THROW(validate(c));
        expect_consistent(c);
    }
}

TEST(Persistence, RipsAndAlphaOnRandomPoints)
{
    const PointCloud pts = oracle::random_ball(100, 17);
    expect_consistent(build_alpha(pts));
    expect_consistent(build_rips(pts, 0.6, 2));
}

TEST(Persistence, FullAlphaHasOneEssentialComponent)
{
    const auto d = compute_persistence(build_alpha(oracle::random_ball(120, 2)));
    EXPECT_EQ(d.infinite_count(0), 1u);
    EXPECT_EQ(d.infinite_count(1), 0u);
    EXPECT_EQ(d.infinite_count(2), 0u);
}

TEST(Persistence, CircleHasOneDominantLoop)
{
    const PointCloud c = oracle::circle(100);
    const auto d = compute_persistence(build_rips(c, enclosing_radius(c), 2));
    const auto l = lifetimes(d, 1);
    ASSERT_GE(l.size(), 1u);
    EXPECT_GE(l[0], 0.5);
    for (std::size_t i = 1; i < l.size(); ++i)
        EXPECT_LE(l[i], 0.2);
}

TEST(Persistence, SphereHasOneDominantVoid)
{
    const auto d = compute_persistence(build_alpha(oracle::sphere(300)));
    const auto l = lifetimes(d, 2);
    ASSERT_GE(l.size(), 1u);
    const double second = l.size() > 1 ? l[1] : 0.0;
    EXPECT_GE(l[0], 5.0 * second);
}

TEST(Persistence, TorusHasTwoDominantLoops)
{
    // 20 x 20 parameter grid on a torus of revolution, alternate rings offset
    // by half a step so that no four samples are cocircular.
    PointCloud c;
    const double R = 2.0, r = 1.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double u = 2 * std::numbers::pi * (i + 0.5 * (j % 2)) / 20.0;
            const double v = 2 * std::numbers::pi * j / 20.0;
            c.points.push_back({(R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u), r * std::sin(v)});
        }
    const auto d = compute_persistence(build_alpha(c));
    const auto l = lifetimes(d, 1);
    ASSERT_GE(l.size(), 3u);
    EXPECT_GE(l[1], 5.0 * l[2]);
    const auto v = lifetimes(d, 2);
    ASSERT_GE(v.size(), 2u);
    EXPECT_GE(v[0], 5.0 * v[1]);
}

TEST(Persistence, ScaleEquivariance)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        FilteredComplex c = oracle::random_complex(rng);
        const auto d = compute_persistence(c);
        for (auto& s : c.simplices)
            s.value *= 0.25;
        const auto scaled = compute_persistence(c);
        ASSERT_EQ(d.pairs.size(), scaled.pairs.size());
        for (std::size_t i = 0; i < d.pairs.size(); ++i) {
            EXPECT_EQ(scaled.pairs[i].birth, 0.25 * d.pairs[i].birth);
            EXPECT_EQ(scaled.pairs[i].death, 0.25 * d.pairs[i].death);
        }
    }
}

TEST(Persistence, RejectsBrokenComplexes)
{
    FilteredComplex missing;
    missing.simplices.push_back(make_simplex(std::vector<VertexId>{0}, 0.0));
    missing.simplices.push_back(make_simplex(std::vector<VertexId>{0, 1}, 1.0));
    EXPECT_THROW(compute_persistence(missing), ComplexError);

    FilteredComplex late;
    late.simplices.push_back(make_simplex(std::vector<VertexId>{0}, 0.0));
    late.simplices.push_back(make_simplex(std::vector<VertexId>{0, 1}, 1.0));
    late.simplices.push_back(make_simplex(std::vector<VertexId>{1}, 2.0));
    EXPECT_THROW(compute_persistence(late), ComplexError);
}

TEST(DiagramCsv, RoundTrip)
{
    PersistenceDiagram d;
    d.pairs = {{0, 0.0, 0.5}, {0, 0.0, kInf}, {1, 0.1234567890123, 0.75}, {2, 1e-17, 3.0}};
    std::sort(d.pairs.begin(), d.pairs.end(), pair_less);
    const std::string text = format_diagram(d);
    EXPECT_NE(text.find(",inf\n"), std::string::npos);
    EXPECT_EQ(parse_diagram(text), d);
    EXPECT_THROW(parse_diagram("dim,birth,death\n1,2,1\n"), ParseError);
    EXPECT_THROW(parse_diagram("dim,birth\n"), ParseError);
}
