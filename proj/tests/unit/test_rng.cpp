#include "alpet/rng.hpp"

#include "check_errc.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using alpet::RngStream;

TEST_CASE("same seed and substream give the same sequence") {
    RngStream a(42, "x"), b(42, "x");
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams and seeds are independent") {
    RngStream a(42, "x"), b(42, "y"), c(43, "x");
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next_u64();
        same_ab += va == b.next_u64();
        same_ac += va == c.next_u64();
    }
    CHECK(same_ab == 0);
    CHECK(same_ac == 0);
}

TEST_CASE("child streams depend only on the label, not on parent draws") {
    RngStream parent(7, "root");
    const auto before = parent.child("k").next_u64();
    for (int i = 0; i < 10; ++i) parent.next_u64();
    CHECK(parent.child("k").next_u64() == before);
    CHECK(parent.child("k").substream() == "root/k");
    CHECK(parent.child("k").next_u64() != parent.child("j").next_u64());
}

TEST_CASE("uniform_index stays in range and is close to uniform") {
    RngStream r(1, "u");
    std::vector<int> counts(7, 0);
    const int trials = 70000;
    for (int i = 0; i < trials; ++i) {
        const auto v = r.uniform_index(7);
        REQUIRE(v < 7);
        ++counts[v];
    }
    for (int c : counts) CHECK(std::abs(c / double(trials) - 1.0 / 7.0) < 0.01);
    CHECK_ERRC(r.uniform_index(0), alpet::Errc::invalid_argument);
    CHECK(r.uniform_index(1) == 0);
}

TEST_CASE("uniform01 is in [0, 1) with mean near one half") {
    RngStream r(2, "f");
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = r.uniform01();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal draws have unit variance") {
    RngStream r(3, "n");
    double s = 0.0, ss = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal();
        s += v;
        ss += v * v;
    }
    CHECK(std::abs(s / n) < 0.02);
    CHECK(ss / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("shuffle is a permutation and sample_without_replacement is distinct") {
    RngStream r(4, "s");
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    auto w = v;
    alpet::shuffle(w, r);
    CHECK(w != v);
    std::sort(w.begin(), w.end());
    CHECK(w == v);
    const auto s = alpet::sample_without_replacement(v, 20, r);
    CHECK(s.size() == 20);
    CHECK(std::set<int>(s.begin(), s.end()).size() == 20);
}
