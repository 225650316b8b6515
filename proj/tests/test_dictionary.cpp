#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dkaf/dictionary.hpp"
#include "dkaf/errors.hpp"
#include "oracle/reference_filter.hpp"

using dkaf::Dictionary;
using dkaf::DictionaryEntry;
using dkaf::KernelParams;
using dkaf::Vector;

namespace {

Dictionary make(std::vector<DictionaryEntry> entries, std::optional<std::size_t> budget = {}) {
    Dictionary d(entries.front().center.size(), budget);
    for (const auto& e : entries) d.append(e);
    return d;
}

}  // namespace

TEST_CASE("predict") {
    const KernelParams p{0.9};
    SUBCASE("single entry at the query returns its weight") {
        auto d = make({{{0.2, -0.4}, 1.75, 0, 1}});
        CHECK(dkaf::predict(d, Vector{0.2, -0.4}, p) == 1.75);
    }
    SUBCASE("zero weights") {
        auto d = make({{{0, 0}, 0.0, 0, 1}, {{1, 1}, 0.0, 0, 1}});
        CHECK(dkaf::predict(d, Vector{0.5, 0.1}, p) == 0.0);
    }
    SUBCASE("matches brute-force sum") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        for (int t = 0; t < 50; ++t) {
            std::vector<DictionaryEntry> es;
            for (int j = 0; j < 3; ++j) es.push_back({{g(rng), g(rng)}, g(rng), 0, 1});
            auto d = make(es);
            Vector x{g(rng), g(rng)};
            double expected = 0.0;
            for (const auto& e : es) expected += e.weight * oracle::k(e.center, x, p.sigma);
            CHECK(dkaf::predict(d, x, p) == doctest::Approx(expected).epsilon(1e-14));
        }
    }
    SUBCASE("empty dictionary and wrong dimension") {
        Dictionary empty(2);
        CHECK_THROWS_AS(dkaf::predict(empty, Vector{0, 0}, p), dkaf::StateError);
        auto d = make({{{0, 0}, 1, 0, 1}});
        CHECK_THROWS_AS(dkaf::predict(d, Vector{0, 0, 0}, p), dkaf::ShapeError);
    }
}

TEST_CASE("predict is linear in the weights") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    const KernelParams p{0.6};
    for (int t = 0; t < 50; ++t) {
        std::vector<Vector> centers(6);
        for (auto& c : centers) c = {g(rng), g(rng)};
        std::vector<double> w1(6), w2(6);
        for (auto& w : w1) w = g(rng);
        for (auto& w : w2) w = g(rng);
        auto build = [&](auto weight) {
            Dictionary d(2);
            for (std::size_t j = 0; j < 6; ++j) d.append({centers[j], weight(j), 0, 1});
            return d;
        };
        const Vector x{g(rng), g(rng)};
        const double a = dkaf::predict(build([&](std::size_t j) { return w1[j]; }), x, p);
        const double b = dkaf::predict(build([&](std::size_t j) { return w2[j]; }), x, p);
        const double ab = dkaf::predict(build([&](std::size_t j) { return w1[j] + w2[j]; }), x, p);
        CHECK(std::fabs(ab - (a + b)) < 1e-12);
    }
}

TEST_CASE("nearest entry") {
    auto d = make({{{0, 0}, 0, 0, 1}, {{2, 0}, 0, 0, 1}, {{5, 5}, 0, 0, 1}});
    SUBCASE("exact hit") {
        auto n = dkaf::nearest_entry(d, Vector{5, 5});
        CHECK(n.index == 2);
        CHECK(n.distance == 0.0);
    }
    SUBCASE("tie goes to the lower index") {
        auto n = dkaf::nearest_entry(d, Vector{1, 0});
        CHECK(n.index == 0);
        CHECK(n.distance == 1.0);
    }
    SUBCASE("matches exhaustive scan") {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> g;
        for (int t = 0; t < 50; ++t) {
            std::vector<DictionaryEntry> es;
            for (int j = 0; j < 10; ++j) es.push_back({{g(rng), g(rng), g(rng)}, 0, 0, 1});
            auto dd = make(es);
            Vector x{g(rng), g(rng), g(rng)};
            std::size_t best = 0;
            for (std::size_t j = 1; j < es.size(); ++j)
                if (oracle::dist(x, es[j].center) < oracle::dist(x, es[best].center)) best = j;
            auto n = dkaf::nearest_entry(dd, x);
            CHECK(n.index == best);
            CHECK(n.distance == doctest::Approx(oracle::dist(x, es[best].center)).epsilon(1e-15));
        }
    }
    SUBCASE("empty") {
        CHECK_THROWS_AS(dkaf::nearest_entry(Dictionary(2), Vector{0, 0}), dkaf::StateError);
    }
}

TEST_CASE("merge_update") {
    auto d = make({{{0}, 0.5, 0, 1}, {{1}, -1.0, 0, 1}});
    dkaf::merge_update(d, 0, 0.1, 1.0);
    CHECK(d.weight(0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(d.weight(1) == -1.0);
    CHECK(d.size() == 2);

    const Dictionary before = d;
    dkaf::merge_update(d, 1, 0.1, 0.0);
    CHECK(d == before);

    // k merges fold into initial + eta * sum(e)
    const std::vector<double> errs{0.3, -1.2, 2.5, 0.01, -0.4};
    double sum = 0.0;
    for (double e : errs) {
        dkaf::merge_update(d, 1, 0.1, e);
        sum += e;
    }
    CHECK(d.weight(1) == doctest::Approx(-1.0 + 0.1 * sum).epsilon(1e-14));

    CHECK_THROWS_AS(dkaf::merge_update(d, 2, 0.1, 1.0), dkaf::StateError);
}

TEST_CASE("add_entry") {
    const KernelParams p{0.5};
    auto d = make({{{0, 0}, 0.2, 1, 1}, {{1, 0}, 0.3, 1, 1}, {{0, 1}, -0.1, 1, 1}});
    const Vector x{0.4, 0.4};
    const double before = dkaf::predict(d, x, p);
    dkaf::add_entry(d, x, 0.1, 0.7);
    REQUIRE(d.size() == 4);
    CHECK(d.weight(3) == doctest::Approx(0.07).epsilon(1e-15));
    CHECK(d.significance(3) == 0.7);
    CHECK(d.age_accum(3) == 1.0);
    CHECK(std::vector<double>(d.center(3).begin(), d.center(3).end()) == x);
    CHECK(dkaf::predict(d, x, p) - before == doctest::Approx(0.1 * 0.7).epsilon(1e-12));

    dkaf::add_entry(d, Vector{2, 2}, 0.1, 0.0);
    CHECK(d.weight(4) == 0.0);
    CHECK_THROWS_AS(dkaf::add_entry(d, Vector{1, 2, 3}, 0.1, 1.0), dkaf::ShapeError);
}

TEST_CASE("significance on add") {
    const KernelParams p{1.0};
    SUBCASE("zero error with no forgetting leaves significance") {
        auto d = make({{{0}, 1, 2.0, 1}, {{3}, 1, 0.5, 1}});
        dkaf::significance_on_add(d, 0.0, 1.0, Vector{1}, p);
        CHECK(d.significance(0) == 2.0);
        CHECK(d.significance(1) == 0.5);
    }
    SUBCASE("coincident new center") {
        auto d = make({{{0.5}, 1, 2.0, 1}});
        dkaf::significance_on_add(d, 1.0, 0.5, Vector{0.5}, p);
        CHECK(d.significance(0) == 2.0);  // 0.5 * 2 + 1 * 1
    }
    SUBCASE("far-away center only decays") {
        auto d = make({{{0}, 1, 2.0, 1}});
        dkaf::significance_on_add(d, 1.0, 0.5, Vector{1e3}, p);
        CHECK(d.significance(0) == 1.0);
    }
}

TEST_CASE("significance on merge") {
    const KernelParams p{1.0};
    SUBCASE("zero increment") {
        auto d = make({{{0}, -0.8, 3.0, 1}});
        dkaf::significance_on_merge(d, 0, 0.1, 0.0, 0.5, p);
        CHECK(d.significance(0) == doctest::Approx(0.5 * 3.0 + 0.8).epsilon(1e-15));
    }
    SUBCASE("two entries, hand evaluated") {
        auto d = make({{{0}, 0.5, 2.0, 1.0}, {{1}, -0.25, 1.0, 0.5}});
        dkaf::significance_on_merge(d, 0, 0.1, 2.5, 0.5, p);
        // other: 0.5 * 1 + |-0.25| * exp(-1); age 0.5 * 0.5
        CHECK(d.significance(1) == doctest::Approx(0.5 + 0.25 * std::exp(-1.0)).epsilon(1e-15));
        CHECK(d.age_accum(1) == 0.25);
        // target: w_new = 0.75, ratio 1.5 -> 1.5 * 0.5 * 2 + 0.75
        CHECK(d.significance(0) == doctest::Approx(2.25).epsilon(1e-15));
        CHECK(d.age_accum(0) == 1.5);
        // weights untouched until merge_update
        CHECK(d.weight(0) == 0.5);
    }
    SUBCASE("all-zero weights with no forgetting") {
        auto d = make({{{0}, 0.0, 1.0, 1}, {{1}, 0.0, 4.0, 1}});
        dkaf::significance_on_merge(d, 1, 0.1, 0.0, 1.0, p);
        CHECK(d.significance(0) == 1.0);
        CHECK(d.significance(1) == 4.0);
    }
    SUBCASE("zero old weight falls back to plain decay") {
        auto d = make({{{0}, 0.0, 2.0, 1}});
        dkaf::significance_on_merge(d, 0, 0.1, 3.0, 0.9, p);
        CHECK(d.significance(0) == doctest::Approx(0.9 * 2.0 + 0.3).epsilon(1e-15));
        CHECK(std::isfinite(d.significance(0)));
    }
}

TEST_CASE("significance on prune") {
    const KernelParams p{1.0};
    SUBCASE("removed entry with zero age") {
        auto d = make({{{0}, 0.4, 3.0, 2.0}});
        dkaf::significance_on_prune(d, DictionaryEntry{{0.1}, 1.0, 0.0, 0.0}, 0.9, p);
        CHECK(d.significance(0) == 3.0);
        CHECK(d.age_accum(0) == doctest::Approx(2.8).epsilon(1e-15));
    }
    SUBCASE("single survivor, hand evaluated") {
        auto d = make({{{0}, -0.4, 3.0, 2.0}});
        dkaf::significance_on_prune(d, DictionaryEntry{{1}, 7.0, 0.1, 0.5}, 0.9, p);
        CHECK(d.significance(0) == doctest::Approx(3.0 - 0.4 * 0.5 * std::exp(-1.0)).epsilon(1e-15));
        CHECK(d.age_accum(0) == doctest::Approx(2.8).epsilon(1e-15));
    }
    SUBCASE("distant removal barely matters") {
        auto d = make({{{0}, 0.9, 3.0, 1.0}, {{0.5}, 0.9, 2.0, 1.0}});
        dkaf::significance_on_prune(d, DictionaryEntry{{40}, 1.0, 0.1, 3.0}, 1.0, p);
        CHECK(std::fabs(d.significance(0) - 3.0) < 1e-12);
        CHECK(std::fabs(d.significance(1) - 2.0) < 1e-12);
    }
}

TEST_CASE("prune_min_significance") {
    const KernelParams p{1.0};
    SUBCASE("argmin") {
        auto d = make({{{0}, 1, 3, 1}, {{5}, 1, 1, 1}, {{10}, 1, 2, 1}}, 2);
        auto removed = dkaf::prune_min_significance(d, 1.0, p);
        REQUIRE(removed);
        CHECK(removed->center == Vector{5});
        CHECK(d.size() == 2);
    }
    SUBCASE("tie removes the lowest index") {
        auto d = make({{{0}, 1, 1, 1}, {{5}, 1, 1, 1}, {{10}, 1, 5, 1}}, 2);
        auto removed = dkaf::prune_min_significance(d, 1.0, p);
        REQUIRE(removed);
        CHECK(removed->center == Vector{0});
    }
    SUBCASE("no-op at or below budget") {
        auto d = make({{{0}, 1, 3, 1}, {{5}, 1, 1, 1}}, 2);
        const Dictionary before = d;
        CHECK_FALSE(dkaf::prune_min_significance(d, 1.0, p));
        CHECK(d == before);
        Dictionary unbounded = make({{{0}, 1, 3, 1}, {{5}, 1, 1, 1}});
        CHECK_FALSE(dkaf::prune_min_significance(unbounded, 1.0, p));
    }
    SUBCASE("grown past the budget by adds") {
        Dictionary d(1, 10);
        std::mt19937_64 rng(4);
        std::normal_distribution<double> g;
        for (int i = 0; i < 11; ++i) {
            Vector x{static_cast<double>(i)};
            const double e = g(rng);
            dkaf::significance_on_add(d, std::fabs(e), 0.9, x, p);
            dkaf::add_entry(d, x, 0.1, e);
        }
        REQUIRE(d.size() == 11);
        CHECK(dkaf::prune_min_significance(d, 0.9, p));
        CHECK(d.size() == 10);
        CHECK_FALSE(dkaf::prune_min_significance(d, 0.9, p));
    }
}

TEST_CASE("random add/merge/prune sequences agree with the straight-line recursions") {
    const KernelParams p{0.7};
    oracle::Params op;
    op.eta = 0.1;
    op.zeta = 0.93;
    op.sigma = p.sigma;
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> pick(0, 2);

    Dictionary d(2, 6);
    std::vector<oracle::Entry> ref;
    dkaf::add_entry(d, Vector{0, 0}, op.eta, 0.5);
    ref.push_back({{0, 0}, op.eta * 0.5, 0.5, 1.0});

    for (int step = 0; step < 300; ++step) {
        const int kind = pick(rng);
        const double e = g(rng);
        if (kind == 0 || d.size() < 2) {
            Vector x{g(rng), g(rng)};
            dkaf::significance_on_add(d, std::fabs(e), op.zeta, x, p);
            dkaf::add_entry(d, x, op.eta, e);
            oracle::sig_add(ref, x, std::fabs(e), op);
            ref.push_back({x, op.eta * e, std::fabs(e), 1.0});
        } else if (kind == 1) {
            const std::size_t j = static_cast<std::size_t>(rng() % d.size());
            dkaf::significance_on_merge(d, j, op.eta, e, op.zeta, p);
            dkaf::merge_update(d, j, op.eta, e);
            oracle::sig_merge(ref, j, e, op);
            ref[j].w += op.eta * e;
        }
        if (d.over_budget()) {
            dkaf::prune_min_significance(d, op.zeta, p);
            oracle::prune(ref, op);
        }
        REQUIRE(d.size() == ref.size());
        CHECK(d.size() <= 6);
        for (std::size_t j = 0; j < ref.size(); ++j) {
            CHECK(std::fabs(d.significance(j) - ref[j].E) < 1e-12);
            CHECK(std::fabs(d.age_accum(j) - ref[j].lambda) < 1e-12);
            CHECK(d.age_accum(j) >= 0.0);
            CHECK(d.weight(j) == ref[j].w);
        }
    }
}
