#include "alpet/cluster.hpp"
#include "alpet/model_signal.hpp"

#include "check_errc.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <set>

using alpet::Errc;
using alpet::Matrix;

namespace {

alpet::KMeansResult km(const fixture::Points& pts, std::size_t k, std::uint64_t seed = 0) {
    alpet::RngStream r(seed, "km");
    return alpet::kmeans(fixture::to_matrix(pts), k, r);
}

alpet::SurprisalMatrix surprisal(const fixture::Points& pts) { return alpet::SurprisalMatrix(fixture::to_matrix(pts)); }

} // namespace

TEST_CASE("kmeans with k = 1 converges to the mean") {
    const auto r = km({{0, 0}, {2, 0}, {4, 6}}, 1);
    CHECK(r.centroids.row(0)[0] == doctest::Approx(2.0));
    CHECK(r.centroids.row(0)[1] == doctest::Approx(2.0));
    CHECK(r.assignments == std::vector<std::size_t>{0, 0, 0});
    CHECK(r.inertia == doctest::Approx(4 + 4 + 4 + 4 + 16));
}

TEST_CASE("kmeans separates two tight pairs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = km({{0, 0}, {0, 1}, {10, 0}, {10, 1}}, 2, seed);
        std::set<std::pair<double, double>> c;
        for (std::size_t i = 0; i < 2; ++i) c.emplace(r.centroids.row(i)[0], r.centroids.row(i)[1]);
        CHECK(c == std::set<std::pair<double, double>>{{0.0, 0.5}, {10.0, 0.5}});
        CHECK(r.assignments[0] == r.assignments[1]);
        CHECK(r.assignments[2] == r.assignments[3]);
        CHECK(r.assignments[0] != r.assignments[2]);
        CHECK(r.inertia == doctest::Approx(1.0));
    }
}

TEST_CASE("kmeans with k = n has zero inertia") {
    const fixture::Points pts{{1, 2}, {3, 1}, {-4, 0}, {0.5, 0.5}};
    const auto r = km(pts, 4);
    CHECK(r.inertia == 0.0);
    CHECK(std::set<std::size_t>(r.assignments.begin(), r.assignments.end()).size() == 4);
}

TEST_CASE("kmeans inertia never increases and runs are bit-reproducible") {
    fixture::Gen g(77);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 5 + g.index(40);
        const auto pts = g.points(n, 1 + g.index(4), t % 2 == 0);
        const std::size_t k = 1 + g.index(std::min<std::size_t>(n, 6));
        const auto a = km(pts, k, t);
        const auto b = km(pts, k, t);
        CHECK(a.centroids == b.centroids);
        CHECK(a.assignments == b.assignments);
        REQUIRE_FALSE(a.inertia_history.empty());
        CHECK(a.inertia_history.back() == a.inertia);
        for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
            CHECK(a.inertia_history[i] <= a.inertia_history[i - 1] + 1e-9);
        }
        // Inertia agrees with a direct recomputation.
        double direct = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = a.centroids.row(a.assignments[i]);
            for (std::size_t j = 0; j < pts[i].size(); ++j) direct += (pts[i][j] - c[j]) * (pts[i][j] - c[j]);
        }
        CHECK(a.inertia == doctest::Approx(direct));
    }
}

TEST_CASE("kmeans argument errors") {
    alpet::RngStream r(0, "km");
    CHECK_ERRC(alpet::kmeans(Matrix(3, 1, 0.0), 0, r), Errc::invalid_argument);
    CHECK_ERRC(alpet::kmeans(Matrix(3, 1, 0.0), 4, r), Errc::capacity);
}

TEST_CASE("ALPS with m = 1 picks the instance nearest the mean") {
    const auto p = fixture::pool(fixture::line({0, 1, 2, 3, 4}));
    const auto s = surprisal(fixture::line({0, 1, 3.4, 7, 10}));
    alpet::RngStream r(0, "alps");
    const auto b = alpet::select_alps(p, s, 1, r);
    CHECK(b.indices == std::vector<std::size_t>{2}); // mean 4.28
    CHECK(b.strategy == "pool-alps");
}

TEST_CASE("ALPS takes one pick per separated cluster") {
    const auto p = fixture::pool(fixture::line({0, 1, 2, 3, 4, 5}));
    const auto s = surprisal({{0, 0}, {0.1, 0.2}, {0.2, 0}, {9, 9}, {9.2, 9.1}, {9.1, 8.8}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        alpet::RngStream r(seed, "alps");
        const auto b = alpet::select_alps(p, s, 2, r);
        REQUIRE(b.indices.size() == 2);
        const bool low0 = b.indices[0] < 3, low1 = b.indices[1] < 3;
        CHECK(low0 != low1);
    }
}

TEST_CASE("ALPS never duplicates when rows coincide") {
    const auto p = fixture::pool(fixture::line({0, 1}));
    const auto s = surprisal({{5, 5}, {5, 5}});
    alpet::RngStream r(0, "alps");
    auto b = alpet::select_alps(p, s, 2, r).indices;
    std::sort(b.begin(), b.end());
    CHECK(b == std::vector<std::size_t>{0, 1});
}

TEST_CASE("ALPS output is m distinct unlabeled indices") {
    fixture::Gen g(5);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 3 + g.index(20);
        auto p = fixture::pool(g.points(n, 2, false), std::vector<int>(n, 0));
        fixture::label(p, {0});
        const auto s = surprisal(g.points(n, 4, t % 2 == 0));
        const std::size_t m = 1 + g.index(n - 1);
        alpet::RngStream r(t, "alps");
        const auto b = alpet::select_alps(p, s, m, r);
        CHECK(b.indices.size() == m);
        CHECK(std::set<std::size_t>(b.indices.begin(), b.indices.end()).size() == m);
        for (std::size_t i : b.indices) CHECK_FALSE(p.is_labeled(i));
    }
    alpet::RngStream r(0, "alps");
    CHECK_ERRC(alpet::select_alps(fixture::pool(fixture::line({1, 2})), surprisal(fixture::line({1})), 1, r),
               Errc::count_mismatch);
}

TEST_CASE("one labeled instance per class makes those instances the anchors") {
    auto p = fixture::pool({{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 3}}, {0, 1, 0, 1, 0});
    fixture::label(p, {0, 1});
    alpet::AnchorConfig cfg{1, 10, alpet::AnchorInner::random};
    alpet::RngStream r(0, "anchor");
    const auto sub = alpet::anchor_subpool(p, 1, cfg, r);
    CHECK(sub.anchors == std::vector<std::size_t>{0, 1});
    // factor * m >= |unlabeled|: the whole unlabeled pool.
    auto members = sub.subpool;
    std::sort(members.begin(), members.end());
    CHECK(members == p.unlabeled());
}

TEST_CASE("anchor subpool ranking matches a brute-force similarity oracle") {
    // 8 points: two labeled per class, six unlabeled at assorted angles.
    const fixture::Points pts{{1, 0},   {1, 0.2}, {0, 1}, {0.1, 1},
                              {1, 0.5}, {0.2, 1}, {-1, 1}, {1, -1}};
    const std::vector<int> labels{0, 0, 1, 1, 0, 1, 0, 1};
    auto p = fixture::pool(pts, labels);
    fixture::label(p, {0, 1, 2, 3});
    alpet::AnchorConfig cfg{2, 1, alpet::AnchorInner::entropy};
    alpet::RngStream r(3, "anchor");
    const auto sub = alpet::anchor_subpool(p, 3, cfg, r);
    CHECK(sub.anchors.size() == 4);
    CHECK(std::set<std::size_t>(sub.anchors.begin(), sub.anchors.end()) == std::set<std::size_t>{0, 1, 2, 3});

    std::vector<double> keys;
    const auto cands = p.unlabeled();
    for (std::size_t c : cands) {
        double s = 0.0;
        for (std::size_t a : sub.anchors) s += 1.0 - oracle::cosine_distance(pts[c], pts[a]);
        keys.push_back(s / 4.0);
    }
    const auto expected = oracle::rank_top(keys, cands, 3, true);
    CHECK(sub.subpool == expected);
    for (std::size_t i = 0; i < sub.subpool.size(); ++i) {
        const auto pos = static_cast<std::size_t>(std::find(cands.begin(), cands.end(), sub.subpool[i]) - cands.begin());
        CHECK(sub.scores[i] == doctest::Approx(keys[pos]).epsilon(1e-12));
    }
}

TEST_CASE("anchor selection stays inside the subpool and the unlabeled set") {
    fixture::Gen g(6);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 12 + g.index(20);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
        auto pts = g.points(n, 3, false);
        auto p = fixture::pool(pts, labels);
        fixture::label(p, {0, 1, 2, 3, 4, 5});
        alpet::AnchorConfig cfg{1 + g.index(3), 1 + g.index(3), t % 2 ? alpet::AnchorInner::random
                                                                       : alpet::AnchorInner::entropy};
        const std::size_t m = 1 + g.index(4);
        const auto unl = p.unlabeled();
        alpet::Matrix pr(unl.size(), 2, 0.0);
        for (std::size_t i = 0; i < unl.size(); ++i) {
            const double a = g.uniform(0, 1);
            pr.row(i)[0] = a;
            pr.row(i)[1] = 1 - a;
        }
        const alpet::ProbabilityMatrix probs(unl, pr);
        alpet::RngStream r1(t, "anchor"), r2(t, "anchor");
        const auto sub = alpet::anchor_subpool(p, m, cfg, r1);
        const auto b = alpet::select_anchor_subpool(p, &probs, m, cfg, r2);
        CHECK(b.strategy == "pool-anchor");
        CHECK(b.indices.size() == m);
        CHECK(sub.subpool.size() == std::min(cfg.subpool_factor * m, unl.size()));
        for (std::size_t i : sub.subpool) CHECK_FALSE(p.is_labeled(i));
        for (std::size_t i : b.indices) {
            CHECK(std::find(sub.subpool.begin(), sub.subpool.end(), i) != sub.subpool.end());
        }
        CHECK(std::set<std::size_t>(b.indices.begin(), b.indices.end()).size() == m);
    }
}

TEST_CASE("anchor errors") {
    auto p = fixture::pool({{1, 0}, {0, 1}, {1, 1}}, {0, 0, 1});
    fixture::label(p, {0});
    alpet::RngStream r(0, "anchor");
    CHECK_ERRC(alpet::anchor_subpool(p, 1, {}, r), Errc::missing_class);
    CHECK_ERRC(alpet::select_anchor_subpool(p, nullptr, 1, {}, r), Errc::invalid_argument);
    CHECK_ERRC(alpet::parse_anchor_inner("margin"), Errc::invalid_argument);
    CHECK(alpet::parse_anchor_inner("random") == alpet::AnchorInner::random);
}
