#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "maxsub/frontier.hpp"
#include "oracles.hpp"

using maxsub::HullPoint;
using maxsub::Interval;

namespace {

const std::vector<double> kSix{1, -2, 3, 4, -1, 5};

std::vector<double> random_array(std::mt19937_64& gen, bool integer) {
    std::uniform_int_distribution<std::size_t> len(1, 64);
    std::uniform_int_distribution<int> ints(-5, 5);
    std::normal_distribution<double> reals(0.3, 1.5);
    std::vector<double> w(len(gen));
    for (double& x : w) x = integer ? ints(gen) : reals(gen);
    return w;
}

}  // namespace

TEST(ConstrainedFrontier, Examples) {
    const auto f = maxsub::constrained_frontier(kSix);
    const std::vector<std::pair<std::size_t, double>> want{{1, 5}, {2, 7}, {3, 8}, {4, 11}, {4, 11}, {4, 11}};
    ASSERT_EQ(f.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(*f[i].budget, i + 1);
        EXPECT_FALSE(f[i].delta.has_value());
        EXPECT_EQ(f[i].length, want[i].first);
        EXPECT_DOUBLE_EQ(f[i].raw_weight, want[i].second);
        EXPECT_DOUBLE_EQ(f[i].raw_weight, oracle::best_interval(kSix, 0.0, i + 1).sum);
    }

    const std::vector<double> neg{-1, -2};
    const auto g = maxsub::constrained_frontier(neg);
    ASSERT_EQ(g.size(), 2u);
    for (const auto& p : g) {
        EXPECT_EQ(p.length, 1u);
        EXPECT_DOUBLE_EQ(p.raw_weight, -1.0);
    }
    EXPECT_DOUBLE_EQ(f.back().raw_weight, maxsub::max_subarray(kSix).raw_weight);
}

TEST(PenalizedFrontier, Examples) {
    const std::vector<double> grid{0, 1, 2, 3};
    const auto f = maxsub::penalized_frontier(kSix, grid);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].length, 4u);
    EXPECT_DOUBLE_EQ(f[0].raw_weight, 11.0);
    EXPECT_DOUBLE_EQ(*f[0].delta, 0.0);
    EXPECT_EQ(f[1].length, 1u);
    EXPECT_DOUBLE_EQ(f[1].raw_weight, 5.0);
    EXPECT_DOUBLE_EQ(*f[1].delta, 2.0);
    EXPECT_FALSE(f[1].budget.has_value());

    const std::vector<double> big{100.0};
    const auto h = maxsub::penalized_frontier(kSix, big);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h[0].length, 1u);
    EXPECT_DOUBLE_EQ(h[0].raw_weight, 5.0);
}

TEST(UpperConvexHull, Examples) {
    const std::vector<HullPoint> pts{{1, 5}, {2, 7}, {3, 8}, {4, 11}};
    const auto hull = maxsub::upper_convex_hull(pts);
    ASSERT_EQ(hull.size(), 2u);
    EXPECT_EQ(hull[0], (HullPoint{1, 5}));
    EXPECT_EQ(hull[1], (HullPoint{4, 11}));
    EXPECT_TRUE(maxsub::on_upper_hull(hull, {2, 7}));
    EXPECT_FALSE(maxsub::is_hull_vertex(hull, {2, 7}));
    EXPECT_FALSE(maxsub::on_upper_hull(hull, {3, 8}));

    const std::vector<HullPoint> one{{3, -2.5}};
    EXPECT_EQ(maxsub::upper_convex_hull(one), one);

    const std::vector<HullPoint> line{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    const auto lh = maxsub::upper_convex_hull(line);
    ASSERT_EQ(lh.size(), 2u);
    EXPECT_EQ(lh.front(), (HullPoint{1, 1}));
    EXPECT_EQ(lh.back(), (HullPoint{4, 4}));
}

TEST(UpperConvexHull, KeepsHeaviestPerLengthAndIsConcave) {
    const std::vector<HullPoint> pts{{2, 1}, {2, 3}, {1, 0}, {3, 2}};
    const auto hull = maxsub::upper_convex_hull(pts);
    ASSERT_EQ(hull.size(), 3u);
    EXPECT_EQ(hull[1], (HullPoint{2, 3}));

    std::mt19937_64 gen(1);
    std::normal_distribution<double> n(0.0, 5.0);
    for (int c = 0; c < 200; ++c) {
        std::vector<HullPoint> p;
        for (std::size_t x = 1; x <= 30; ++x) p.push_back({x, n(gen)});
        const auto h = maxsub::upper_convex_hull(p);
        for (std::size_t i = 2; i < h.size(); ++i) {
            const double s1 = (h[i - 1].weight - h[i - 2].weight) / double(h[i - 1].length - h[i - 2].length);
            const double s2 = (h[i].weight - h[i - 1].weight) / double(h[i].length - h[i - 1].length);
            EXPECT_GT(s1, s2);
        }
        for (const auto& q : p) {
            // Every input point is on or under the hull.
            for (std::size_t i = 0; i + 1 < h.size(); ++i) {
                if (h[i].length <= q.length && q.length <= h[i + 1].length) {
                    const double t = double(q.length - h[i].length) / double(h[i + 1].length - h[i].length);
                    EXPECT_LE(q.weight, h[i].weight + t * (h[i + 1].weight - h[i].weight) + 1e-9);
                }
            }
        }
    }
}

TEST(SolveWithLengthBudget, DualityGapWitness) {
    const auto r = maxsub::solve_with_length_budget(kSix, 2);
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.solution.interval, (Interval{5, 5}));
    EXPECT_DOUBLE_EQ(r.solution.raw_weight, 5.0);
    ASSERT_TRUE(r.gap.has_value());
    EXPECT_DOUBLE_EQ(*r.gap, 2.0);
    EXPECT_DOUBLE_EQ(maxsub::max_subarray_constrained(kSix, 2).raw_weight, 7.0);
    // Length-1 solutions start at delta = 2.
    EXPECT_NEAR(r.delta_used, 2.0, 1e-4);
}

TEST(SolveWithLengthBudget, InactiveConstraint) {
    auto r = maxsub::solve_with_length_budget(kSix, 4);
    EXPECT_EQ(r.solution.interval, (Interval{2, 5}));
    EXPECT_DOUBLE_EQ(r.solution.raw_weight, 11.0);
    EXPECT_NEAR(r.delta_used, 0.0, 1e-12);

    r = maxsub::solve_with_length_budget(kSix, kSix.size());
    EXPECT_EQ(r.solution.interval, maxsub::max_subarray(kSix).interval);
    EXPECT_NEAR(r.delta_used, 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(*r.gap, 0.0);

    EXPECT_THROW(maxsub::solve_with_length_budget(kSix, 0), maxsub::InvalidInput);
    EXPECT_THROW(maxsub::solve_with_length_budget(kSix, 7), maxsub::InvalidInput);
    EXPECT_THROW(maxsub::solve_with_length_budget(kSix, 2, -1.0), maxsub::InvalidInput);
}

TEST(SolveWithLengthBudget, AlwaysFeasibleAndAboveMaxElement) {
    std::mt19937_64 gen(31);
    for (int c = 0; c < 300; ++c) {
        const auto w = random_array(gen, c % 2 == 0);
        std::uniform_int_distribution<std::size_t> kd(1, w.size());
        const std::size_t k = kd(gen);
        const auto r = maxsub::solve_with_length_budget(w, k);
        ASSERT_TRUE(r.feasible);
        EXPECT_LE(r.solution.length(), k);
        EXPECT_GE(r.solution.raw_weight, *std::max_element(w.begin(), w.end()) - 1e-12);
        EXPECT_GE(*r.gap, -1e-9);
    }
}

TEST(HullCheck, Examples) {
    const auto rep = maxsub::hull_check(kSix);
    EXPECT_TRUE(rep.penalized_on_hull);
    EXPECT_TRUE(rep.vertices_attained);
    ASSERT_EQ(rep.hull.size(), 2u);
    EXPECT_EQ(rep.hull[0], (HullPoint{1, 5}));
    EXPECT_EQ(rep.hull[1], (HullPoint{4, 11}));
    ASSERT_EQ(rep.rows.size(), 6u);
    // (K, on_hull, is_vertex, attained)
    EXPECT_TRUE(rep.rows[0].is_vertex && rep.rows[0].attained_by_delta);
    EXPECT_TRUE(rep.rows[1].on_hull && !rep.rows[1].is_vertex && !rep.rows[1].attained_by_delta);
    EXPECT_FALSE(rep.rows[2].on_hull);
    EXPECT_TRUE(rep.rows[3].is_vertex && rep.rows[3].attained_by_delta);

    const std::vector<double> flat(7, 2.0);
    const auto f = maxsub::hull_check(flat);
    EXPECT_TRUE(f.penalized_on_hull);
    EXPECT_TRUE(f.vertices_attained);
    ASSERT_EQ(f.hull.size(), 2u);
    EXPECT_EQ(f.hull.front().length, 1u);
    EXPECT_EQ(f.hull.back().length, 7u);

    const std::vector<double> one{-4};
    const auto s = maxsub::hull_check(one);
    ASSERT_EQ(s.rows.size(), 1u);
    EXPECT_TRUE(s.rows[0].is_vertex);
}

TEST(HullCheck, RandomArrays) {
    std::mt19937_64 gen(123);
    for (int c = 0; c < 200; ++c) {
        const auto w = random_array(gen, c % 2 == 0);
        const auto rep = maxsub::hull_check(w);
        ASSERT_TRUE(rep.penalized_on_hull) << "case " << c;
        ASSERT_TRUE(rep.vertices_attained) << "case " << c;
    }
}
