#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fairspace/group_geometry.hpp"
#include "oracle.hpp"

using namespace fairspace;

namespace {

// Two groups of two points each on the line; within-group geometry rigid.
GroupedMetricSpace two_by_two(const std::string& id, double gap, double width = 0.1) {
    return oracle::line_space(id, {0.0, width, gap, gap + width}, {0, 0, 1, 1});
}

}  // namespace

TEST_CASE("between-group distance of a space with its copy is zero") {
    auto x = two_by_two("x", 1.0);
    CHECK(between_group_distance(x, x) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("between-group distance: gap 1 versus gap 3") {
    // Group-level spaces are two-point spaces with distances 1 and 3; the
    // pair-set brute force gives 0.5 and C(2,2) = 1 leaves it unchanged.
    auto x = oracle::line_space("x", {0, 1}, {0, 1});
    auto y = oracle::line_space("y", {0, 3}, {0, 1});
    double expected = oracle::gw_brute_force(x.dist, x.measure, y.dist, y.measure);
    CHECK(expected == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(between_group_distance(x, y) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("between-group distance errors") {
    auto x = two_by_two("x", 1.0);
    auto one_group = oracle::line_space("y", {0, 1, 2, 3});
    CHECK_THROWS_AS(between_group_distance(x, one_group), Error);
    CHECK_THROWS_AS(between_group_distance(one_group, one_group), Error);
}

TEST_CASE("within-group distance of a copy is zero") {
    auto x = two_by_two("x", 2.0);
    auto [rw, per_group] = within_group_distance(x, x);
    CHECK(rw == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(per_group.size() == 2);
}

TEST_CASE("within-group distance: one rigid group, one doubled") {
    // Group 2 stretches {0,1} to {0,2}: the pair-set oracle gives 0.25,
    // so the mean over groups is 0.125.
    auto x = oracle::line_space("x", {0, 1, 10, 11}, {0, 0, 1, 1});
    auto y = oracle::line_space("y", {0, 1, 10, 12}, {0, 0, 1, 1});
    auto a = oracle::line_space("a", {0, 1});
    auto b = oracle::line_space("b", {0, 2});
    double stretched = oracle::gw_brute_force(a.dist, a.measure, b.dist, b.measure);
    CHECK(stretched == doctest::Approx(0.25).epsilon(1e-9));

    auto [rw, per_group] = within_group_distance(x, y);
    CHECK(per_group[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(per_group[1] == doctest::Approx(stretched).epsilon(1e-9));
    CHECK(rw == doctest::Approx(stretched / 2).epsilon(1e-9));
}

TEST_CASE("single group: the mean is the lone per-group value") {
    auto x = oracle::line_space("x", {0, 1});
    auto y = oracle::line_space("y", {0, 2});
    auto [rw, per_group] = within_group_distance(x, y);
    CHECK(per_group.size() == 1);
    CHECK(rw == doctest::Approx(per_group[0]));
}

TEST_CASE("group count mismatch is rejected") {
    auto x = two_by_two("x", 1.0);
    auto y = oracle::line_space("y", {0, 1, 2, 3}, {0, 1, 2, 2});
    CHECK_THROWS_AS(within_group_distance(x, y), Error);
}

TEST_CASE("additive skew of identical spaces is exactly one") {
    auto x = two_by_two("x", 1.0);
    auto report = group_skew(x, x, 0.01);
    CHECK(report.rho_b == 0.0);
    CHECK(report.rho_w == 0.0);
    CHECK(report.sigma == 1.0);
}

TEST_CASE("structural-bias construction: groups pushed apart, rigid within") {
    auto x = two_by_two("x", 1.0);
    auto y = two_by_two("y", 3.0);
    auto report = group_skew(x, y, 0.01);
    CHECK(report.rho_w == doctest::Approx(0.0).epsilon(1e-12));

    // oracle value for the group-level pair problem
    auto gx = induce_group_space(x);
    auto gy = induce_group_space(y);
    double rho_b = oracle::gw_brute_force(gx.dist, gx.measure, gy.dist, gy.measure);
    CHECK(report.rho_b == doctest::Approx(rho_b).epsilon(1e-9));
    CHECK(report.sigma == doctest::Approx((rho_b + 0.01) / 0.01).epsilon(1e-9));
    CHECK(report.sigma > 1.0);
}

TEST_CASE("within-only distortion drives the skew below one") {
    auto x = oracle::line_space("x", {0, 1, 10, 11}, {0, 0, 1, 1});
    auto y = oracle::line_space("y", {0, 2, 10, 12}, {0, 0, 1, 1});
    auto report = group_skew(x, y, 0.01);
    CHECK(report.rho_b == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(report.rho_w > 0.0);
    CHECK(report.sigma < 1.0);
}

TEST_CASE("skew components are symmetric in the two spaces") {
    auto x = two_by_two("x", 1.0);
    auto y = two_by_two("y", 2.5, 0.2);
    auto ab = group_skew(x, y, 0.05);
    auto ba = group_skew(y, x, 0.05);
    CHECK(ab.rho_b == doctest::Approx(ba.rho_b).epsilon(1e-9));
    CHECK(ab.rho_w == doctest::Approx(ba.rho_w).epsilon(1e-9));
}

TEST_CASE("sigma is always positive and the radius must be") {
    auto x = two_by_two("x", 1.0);
    CHECK_THROWS_AS(group_skew(x, x, 0.0), Error);
    CHECK_THROWS_AS(group_skew(x, x, -1.0), Error);
    auto report = group_skew(x, x, 1e-9);
    CHECK(report.sigma > 0.0);
}

TEST_CASE("perturb mode is deterministic per seed") {
    auto x = two_by_two("x", 1.0);
    auto y = two_by_two("y", 3.0);
    auto a = group_skew(x, y, 0.05, SmoothingMode::perturb, 11);
    auto b = group_skew(x, y, 0.05, SmoothingMode::perturb, 11);
    CHECK(a.sigma == b.sigma);
    auto c = group_skew(x, y, 0.05, SmoothingMode::perturb, 12);
    CHECK(a.sigma != c.sigma);
}

TEST_CASE("perturb-mode medians drift toward the additive ratio as delta shrinks") {
    // Non-degenerate fixture: both rho_b and rho_w strictly positive.
    auto x = oracle::line_space("x", {0.0, 1.0, 4.0, 5.0}, {0, 0, 1, 1});
    auto y = oracle::line_space("y", {0.0, 1.5, 6.0, 7.2}, {0, 0, 1, 1});
    double target = between_group_distance(x, y) / within_group_distance(x, y).first;

    std::vector<double> gaps;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
        std::vector<double> sigmas;
        for (uint64_t seed = 0; seed < 11; ++seed)
            sigmas.push_back(group_skew(x, y, delta, SmoothingMode::perturb, seed).sigma);
        std::sort(sigmas.begin(), sigmas.end());
        gaps.push_back(std::abs(sigmas[sigmas.size() / 2] - target));
    }
    CHECK(gaps[1] < gaps[0]);
    CHECK(gaps[2] < gaps[1]);
}

TEST_CASE("default smoothing radius follows the larger diameter") {
    auto x = two_by_two("x", 1.0);
    auto y = two_by_two("y", 3.0);
    CHECK(default_smoothing_delta(x, y) == doctest::Approx(1e-3 * y.diameter()));
}
