#include "lehmer/grow.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <random>
#include <set>

using namespace lehmer;

namespace {

// Every vector over pool of length n, first nonzero entry positive.
std::size_t direct_count(const std::vector<QuadInt>& pool, int n, std::optional<std::int64_t> bound) {
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= pool.size();
    std::size_t count = 0;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::int64_t weight = 0;
        int first = 0;  // 0 none yet, 1 positive, -1 negative
        for (int i = 0; i < n; ++i) {
            const QuadInt& q = pool[c % pool.size()];
            c /= pool.size();
            weight += q.norm();
            if (first == 0 && !q.is_zero()) first = is_positive(q) ? 1 : -1;
        }
        if (first == 1 && (!bound || weight <= *bound)) ++count;
    }
    return count;
}

LGraph x3a_graph(const RingSpec& r) {
    LGraph g(r, 3);
    g.set_entry(0, 2, QuadInt(r, 0, 1));
    g.set_entry(2, 1, QuadInt(r, 0, 1));
    g.set_entry(0, 1, QuadInt::integer(r, 1));
    return g;
}

}  // namespace

TEST_CASE("reduced column count is (|L|^n - 1) / 2") {
    for (std::int64_t d : {-2, -7, -5}) {
        const RingSpec r = ring_make(d);
        for (LabelTag tag : {LabelTag::l_prime, LabelTag::l1_zero, LabelTag::full_l}) {
            const auto pool = label_set(r, tag).members;
            for (int n = 1; n <= 4; ++n) {
                if (tag == LabelTag::full_l && n > 3) continue;
                std::size_t total = 1;
                for (int i = 0; i < n; ++i) total *= pool.size();
                const std::size_t got = enumerate_columns(ColumnSpec{n, pool, true, std::nullopt, {}},
                                                          [](const std::vector<QuadInt>&) { return true; });
                CAPTURE(d);
                CAPTURE(n);
                CHECK(got == (total - 1) / 2);
                CHECK(got == direct_count(pool, n, std::nullopt));
            }
        }
    }
}

TEST_CASE("bounded column count matches direct enumeration") {
    const RingSpec r = ring_make(-7);
    const auto pool = label_set(r, LabelTag::l_prime).members;
    for (int n = 1; n <= 4; ++n) {
        for (std::int64_t b = 1; b <= 4; ++b) {
            const std::size_t got = enumerate_columns(ColumnSpec{n, pool, true, b, {}},
                                                      [](const std::vector<QuadInt>&) { return true; });
            CHECK(got == direct_count(pool, n, b));
        }
    }
}

TEST_CASE("columns are distinct, reduced and respect per-position caps") {
    const RingSpec r = ring_make(-2);
    const auto pool = label_set(r, LabelTag::l_prime).members;
    std::set<std::vector<QuadInt>> seen;
    enumerate_columns(ColumnSpec{3, pool, true, 4, {1, 4, 0}}, [&](const std::vector<QuadInt>& c) {
        CHECK(seen.insert(c).second);
        CHECK(c[0].norm() <= 1);
        CHECK(c[2].is_zero());
        std::vector<QuadInt> neg;
        for (const auto& q : c) neg.push_back(-q);
        CHECK_FALSE(seen.count(neg));
        return true;
    });
    CHECK_FALSE(seen.empty());
    std::size_t visited = enumerate_columns(ColumnSpec{3, pool, false, std::nullopt, {}},
                                            [](const std::vector<QuadInt>&) { return false; });
    CHECK(visited == 1);
}

TEST_CASE("AdditionProbe agrees with materialised supergraphs") {
    std::mt19937_64 rng(53);
    for (std::int64_t d : {-2, -7}) {
        const RingSpec r = ring_make(d);
        const auto pool = label_set(r, LabelTag::l_prime).members;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
        int probed = 0;
        for (int t = 0; t < 2000 && probed < 150; ++t) {
            const LGraph base = oracle::random_graph(rng, r, 2 + t % 5, pool, 1);
            if (!is_cyclotomic(base)) continue;
            ++probed;
            const AdditionProbe probe(base);
            for (int s = 0; s < 10; ++s) {
                std::vector<QuadInt> col;
                std::vector<std::int64_t> cx, cy;
                for (int i = 0; i < base.n(); ++i) {
                    col.push_back(pool[static_cast<std::size_t>(pick(rng))]);
                    cx.push_back(col.back().x());
                    cy.push_back(col.back().y());
                }
                const std::int64_t x = s % 3 - 1;
                const LGraph g = add_vertex(base, col, x);
                const bool cyc = probe.cyclotomic(cx.data(), cy.data(), x);
                CHECK(cyc == is_cyclotomic(g));
                CHECK((classify_addition(g) == AdditionClass::cyclotomic) == cyc);
                if (!cyc && is_connected(g)) CHECK(probe.minimal(cx.data(), cy.data(), x) == is_minimal_noncyclotomic(g));
            }
        }
        CHECK(probed >= 50);
    }
}

TEST_CASE("minimal noncyclotomic examples") {
    const RingSpec r = ring_make(-2);
    LGraph h1(r, 2);
    h1.set_charge(0, 1);
    h1.set_charge(1, 1);
    h1.set_entry(0, 1, QuadInt(r, 0, 1));
    CHECK(is_minimal_noncyclotomic(h1));
    CHECK(is_minimal_noncyclotomic(x3a_graph(r)));
    LGraph big(r, 1);
    big.set_charge(0, 3);
    CHECK(is_minimal_noncyclotomic(big));
    // Contains the noncyclotomic H1.
    const LGraph g = add_vertex(h1, {QuadInt::integer(r, 1), QuadInt::integer(r, 0)}, 0);
    CHECK_FALSE(is_cyclotomic(g));
    CHECK_FALSE(is_minimal_noncyclotomic(g));
}

TEST_CASE("type I filters act on proper containment only") {
    const RingSpec r = ring_make(-2);
    const LGraph x3a = x3a_graph(r);
    GrowthFilterSet f;
    f.x3a = true;
    CHECK(apply_filters(x3a, f).keep);
    const LGraph bigger = add_vertex(x3a, {QuadInt::integer(r, 1), QuadInt::integer(r, 0), QuadInt::integer(r, 0)}, 0);
    const FilterVerdict v = apply_filters(bigger, f);
    CHECK_FALSE(v.keep);
    CHECK(v.reason == "X3A");
    CHECK(v.witness.size() == 3);
    CHECK(apply_filters(bigger, GrowthFilterSet::none()).keep);
    // Anchored matches must use the anchor vertex.
    CHECK(apply_filters(bigger, f, 3).keep);
    CHECK_FALSE(apply_filters(bigger, f, 0).keep);
}

TEST_CASE("degree cap filter") {
    const RingSpec r = ring_make(-2);
    LGraph star(r, 4);
    star.set_entry(0, 1, QuadInt(r, 0, 1));
    star.set_entry(0, 2, QuadInt(r, 0, 1));
    star.set_entry(0, 3, QuadInt::integer(r, 1));
    GrowthFilterSet f;
    f.degree_cap = true;
    const FilterVerdict v = apply_filters(star, f);
    CHECK_FALSE(v.keep);
    CHECK(v.reason == "degree");
    CHECK(v.witness == std::vector<int>{0});
    star.set_entry(0, 3, QuadInt::integer(r, 0));
    CHECK(apply_filters(star, f).keep);
}
