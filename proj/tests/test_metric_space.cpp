#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fairspace/metric_space.hpp"
#include "fairspace/rng.hpp"
#include "fairspace/transport.hpp"
#include "oracle.hpp"

using namespace fairspace;

namespace {

Matrix mat(std::vector<std::vector<double>> rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

bool has_code(const std::vector<Violation>& vs, Errc code) {
    for (const auto& v : vs)
        if (v.code == code) return true;
    return false;
}

}  // namespace

TEST_CASE("two point space validates") {
    auto s = make_space("s", {"a", "b"}, mat({{0, 1}, {1, 0}}), {0.5, 0.5}, {0, 0});
    CHECK(s.size() == 2);
    CHECK(s.group_count() == 1);
    CHECK(s.diameter() == 1.0);
}

TEST_CASE("asymmetry is rejected") {
    auto vs = validate_space_data({"a", "b"}, mat({{0, 1}, {2, 0}}), {0.5, 0.5}, {0, 0}, {});
    CHECK(has_code(vs, Errc::asymmetry));
}

TEST_CASE("triangle violation 5 > 1 + 1 is rejected") {
    auto vs = validate_space_data({"a", "b", "c"}, mat({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}),
                                  uniform_measure(3), {0, 0, 0}, {});
    CHECK(has_code(vs, Errc::triangle_violation));
}

TEST_CASE("every violated invariant is reported at once") {
    // asymmetric, bad diagonal, bad measure, empty group 1 of 2
    auto vs = validate_space_data({"a", "b"}, mat({{0, 1}, {2, 1}}), {0.7, 0.7}, {1, 1}, {});
    CHECK(has_code(vs, Errc::asymmetry));
    CHECK(has_code(vs, Errc::nonzero_diagonal));
    CHECK(has_code(vs, Errc::bad_measure));
    CHECK(has_code(vs, Errc::empty_group));
    CHECK_THROWS_AS(make_space("s", {"a", "b"}, mat({{0, 1}, {2, 1}}), {0.7, 0.7}, {1, 1}),
                    ValidationError);
}

TEST_CASE("negative and non-finite distances are rejected") {
    auto vs = validate_space_data({"a", "b"}, mat({{0, -1}, {-1, 0}}), {0.5, 0.5}, {0, 0}, {});
    CHECK(has_code(vs, Errc::negative_distance));
}

TEST_CASE("embedding mismatch with dist is rejected") {
    Embedding e = {{0.0}, {5.0}};
    auto vs = validate_space_data({"a", "b"}, mat({{0, 1}, {1, 0}}), {0.5, 0.5}, {0, 0}, e);
    CHECK(has_code(vs, Errc::schema_error));
}

TEST_CASE("space map flags are recomputed from the assignment") {
    auto x = oracle::line_space("x", {0, 1, 2});
    auto y = oracle::line_space("y", {0, 1});
    SpaceMap onto{x.space_id, y.space_id, {0, 1, 0}};
    CHECK(onto.rich(y.size()));
    CHECK(!onto.injective());
    SpaceMap constant{x.space_id, y.space_id, {0, 0, 0}};
    CHECK(!constant.rich(y.size()));
    SpaceMap inj{y.space_id, x.space_id, {2, 0}};
    CHECK(inj.injective());
    CHECK(!inj.rich(x.size()));
}

TEST_CASE("make_map requires a total assignment") {
    auto x = oracle::line_space("x", {0, 1});
    auto y = oracle::line_space("y", {0, 1});
    CHECK_THROWS_AS(make_map(x, y, {{"x0", "y0"}}), Error);
    auto f = make_map(x, y, {{"x0", "y1"}, {"x1", "y0"}});
    CHECK(f.image == std::vector<size_t>{1, 0});
}

TEST_CASE("compose chains images") {
    auto x = oracle::line_space("x", {0, 1});
    auto y = oracle::line_space("y", {0, 1, 2});
    auto z = oracle::line_space("z", {0, 1});
    SpaceMap f{x.space_id, y.space_id, {2, 1}};
    SpaceMap g{y.space_id, z.space_id, {0, 0, 1}};
    auto h = compose(f, g);
    CHECK(h.image == std::vector<size_t>{1, 0});
    SpaceMap bad{x.space_id, "elsewhere", {0, 0}};
    CHECK_THROWS_AS(compose(bad, g), Error);
}

TEST_CASE("group space: two singletons on the line") {
    auto s = oracle::line_space("s", {0, 3}, {0, 1});
    auto gl = induce_group_space(s);
    CHECK(gl.group_count() == 2);
    CHECK(gl.dist.at(0, 1) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(gl.measure[0] == doctest::Approx(0.5));
}

TEST_CASE("group space: interleaved pairs give distance 1") {
    // A = {0, 2}, B = {1, 3}; brute force over the two permutation couplings
    // gives min((1+1)/2, (3+1)/2) = 1.
    auto s = oracle::line_space("s", {0, 2, 1, 3}, {0, 0, 1, 1});
    auto gl = induce_group_space(s);
    CHECK(gl.dist.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("group space with one group is a point at distance zero") {
    auto s = oracle::line_space("s", {0, 5, 9});
    auto gl = induce_group_space(s);
    CHECK(gl.group_count() == 1);
    CHECK(gl.dist.at(0, 0) == 0.0);
    CHECK(gl.measure[0] == doctest::Approx(1.0));
}

TEST_CASE("group distances never exceed the ambient diameter") {
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        size_t n = 4 + rng.next_u64() % 5;
        Embedding emb;
        std::vector<std::string> ids;
        std::vector<int> groups;
        for (size_t i = 0; i < n; ++i) {
            emb.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
            ids.push_back("p" + std::to_string(i));
            groups.push_back(i < 2 ? static_cast<int>(i) : static_cast<int>(rng.next_u64() % 2));
        }
        auto s = make_space_from_embedding("s", ids, emb, uniform_measure(n), groups);
        auto gl = induce_group_space(s);
        for (size_t a = 0; a < gl.group_count(); ++a)
            for (size_t b = 0; b < gl.group_count(); ++b)
                CHECK(gl.dist.at(a, b) <= s.diameter() + 1e-9);
    }
}

TEST_CASE("perturb with zero radius is the identity for all seeds") {
    auto s = oracle::line_space("s", {0, 1, 2.5}, {0, 1, 1});
    for (uint64_t seed : {0ull, 1ull, 99ull}) {
        auto p = perturb(s, 0.0, seed);
        CHECK(p.dist == s.dist);
        CHECK(p.embedding == s.embedding);
    }
}

TEST_CASE("perturb moves every distance by at most twice the radius") {
    Rng rng(7);
    Embedding emb;
    std::vector<std::string> ids;
    for (size_t i = 0; i < 8; ++i) {
        emb.push_back({rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)});
        ids.push_back("p" + std::to_string(i));
    }
    auto s = make_space_from_embedding("s", ids, emb, uniform_measure(8),
                                       std::vector<int>(8, 0));
    double delta = 0.2;
    auto p = perturb(s, delta, 3);
    for (size_t i = 0; i < 8; ++i)
        for (size_t j = 0; j < 8; ++j)
            CHECK(std::abs(p.dist.at(i, j) - s.dist.at(i, j)) <= 2 * delta + 1e-12);
}

TEST_CASE("perturbed two point line stays within the interval oracle") {
    auto s = oracle::line_space("s", {0, 1});
    auto p = perturb(s, 0.1, 12345);
    // Each endpoint moves by at most 0.1, so d lands in [0.8, 1.2].
    CHECK(p.dist.at(0, 1) >= 0.8);
    CHECK(p.dist.at(0, 1) <= 1.2);
}

TEST_CASE("matrix-mode perturbation repairs the metric") {
    auto base = make_space("s", {"a", "b", "c"}, mat({{0, 1, 2}, {1, 0, 1.2}, {2, 1.2, 0}}),
                           uniform_measure(3), {0, 0, 0});
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto p = perturb(base, 0.3, seed);
        auto vs = validate_space_data(p.point_ids, p.dist, p.measure, p.group_of, p.embedding);
        CHECK(vs.empty());
        CHECK(!p.embedding.has_value());
    }
}

TEST_CASE("perturb is deterministic per seed") {
    auto s = oracle::line_space("s", {0, 1, 2});
    auto a = perturb(s, 0.05, 9);
    auto b = perturb(s, 0.05, 9);
    CHECK(a.dist == b.dist);
    auto c = perturb(s, 0.05, 10);
    CHECK(a.dist.data != c.dist.data);
}

TEST_CASE("negative radius is rejected") {
    auto s = oracle::line_space("s", {0, 1});
    CHECK_THROWS_AS(perturb(s, -0.1, 0), Error);
}

TEST_CASE("subspace renormalizes the measure") {
    auto s = make_space("s", {"a", "b", "c"}, mat({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}),
                        {0.2, 0.3, 0.5}, {0, 0, 1});
    auto sub = subspace(s, {0, 1});
    CHECK(sub.measure[0] == doctest::Approx(0.4));
    CHECK(sub.measure[1] == doctest::Approx(0.6));
    CHECK(sub.dist.at(0, 1) == 1.0);
}
