#include "lehmer/lgraph.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <random>

using namespace lehmer;

namespace {

// Coefficients of prod (x - l_i), ascending.
std::vector<double> poly_from_roots(const std::vector<double>& eig) {
    std::vector<double> c{1};
    for (double l : eig) {
        std::vector<double> next(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= l * c[i];
        }
        c = next;
    }
    return c;
}

LGraph h1(const RingSpec& r, const QuadInt& w) {
    LGraph g(r, 2);
    g.set_charge(0, 1);
    g.set_charge(1, 1);
    g.set_entry(0, 1, w);
    return g;
}

}  // namespace

TEST_CASE("entries are Hermitian") {
    const RingSpec r = ring_make(-7);
    LGraph g(r, 3);
    g.set_entry(0, 2, QuadInt(r, 1, 1));
    CHECK(g.entry(2, 0) == QuadInt(r, 1, -1));
    CHECK(g.adjacent(0, 2));
    CHECK_FALSE(g.adjacent(0, 1));
    CHECK(g.norm(2, 0) == 2);
    g.set_charge(1, -1);
    CHECK(weighted_degree(g, 1) == 1);
    CHECK(weighted_degree(g, 0) == 2);
}

TEST_CASE("graph_make validates its input") {
    const RingSpec r = ring_make(-2);
    const QuadInt one = QuadInt::integer(r, 1);
    CHECK_NOTHROW(graph_make(r, 2, std::vector<std::int64_t>{1, 0}, {one}));
    CHECK_THROWS_AS(graph_make(r, 2, std::vector<std::int64_t>{1, 0}, {}), ValidationError);
    CHECK_THROWS_AS(graph_make(r, 2, std::vector<QuadInt>{QuadInt(r, 0, 1), one}, {one}), ValidationError);
    CHECK_THROWS_AS(graph_make(r, 2, std::vector<std::int64_t>{1, 0}, {QuadInt::integer(ring_make(-5), 1)}),
                    ValidationError);
}

TEST_CASE("char_poly matches the numeric spectrum") {
    std::mt19937_64 rng(41);
    for (std::int64_t d : {-2, -7, -11, -15, -5}) {
        const RingSpec r = ring_make(d);
        const auto pool = label_set(r, LabelTag::full_l).members;
        for (int t = 0; t < 40; ++t) {
            const LGraph g = oracle::random_graph(rng, r, 1 + t % 7, pool, 2);
            const IntPoly p = char_poly(g);
            const auto ref = poly_from_roots(oracle::eigenvalues(g));
            REQUIRE(p.degree() == g.n());
            for (int i = 0; i <= g.n(); ++i) {
                CHECK(p.coeff(i).get_d() == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-6).scale(1e3));
            }
            std::vector<std::int64_t> fast;
            REQUIRE(char_poly_i64(g, fast));
            for (int i = 0; i <= g.n(); ++i) CHECK(mpz_class(fast[static_cast<std::size_t>(i)]) == p.coeff(i));
        }
    }
}

TEST_CASE("ExtensionCharPoly agrees with char_poly of the supergraph") {
    std::mt19937_64 rng(43);
    for (std::int64_t d : {-2, -7}) {
        const RingSpec r = ring_make(d);
        const auto pool = label_set(r, LabelTag::l_prime).members;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
        for (int t = 0; t < 50; ++t) {
            const LGraph base = oracle::random_graph(rng, r, 2 + t % 6, pool, 1);
            const ExtensionCharPoly ext(base);
            std::vector<QuadInt> col;
            std::vector<std::int64_t> cx, cy;
            for (int i = 0; i < base.n(); ++i) {
                col.push_back(pool[static_cast<std::size_t>(pick(rng))]);
                cx.push_back(col.back().x());
                cy.push_back(col.back().y());
            }
            const std::int64_t charge = t % 3 - 1;
            std::vector<std::int64_t> out;
            REQUIRE(ext.compute(cx.data(), cy.data(), charge, out));
            const IntPoly ref = char_poly(add_vertex(base, col, charge));
            for (int i = 0; i <= ref.degree(); ++i) CHECK(mpz_class(out[static_cast<std::size_t>(i)]) == ref.coeff(i));
        }
    }
}

TEST_CASE("cyclotomicity of small graphs") {
    const RingSpec r = ring_make(-2);
    LGraph one(r, 1);
    one.set_charge(0, 2);
    CHECK(is_cyclotomic(one));
    one.set_charge(0, -3);
    CHECK_FALSE(is_cyclotomic(one));
    CHECK_FALSE(is_cyclotomic(h1(r, QuadInt(r, 0, 1))));
    LGraph s2(r, 2);
    s2.set_charge(0, 1);
    s2.set_charge(1, -1);
    s2.set_entry(0, 1, QuadInt(r, 0, 1));
    CHECK(is_cyclotomic(s2));  // x^2 - 3
}

TEST_CASE("structural operations") {
    const RingSpec r = ring_make(-7);
    LGraph g(r, 4);
    g.set_entry(0, 1, QuadInt(r, 1, 1));
    g.set_entry(2, 3, QuadInt::integer(r, -1));
    g.set_charge(3, 1);
    CHECK(components(g).size() == 2);
    CHECK_FALSE(is_connected(g));
    const LGraph sub = induced_subgraph(g, {2, 3});
    CHECK(sub.n() == 2);
    CHECK(sub.charge(1) == 1);
    CHECK(delete_vertex(g, 0).n() == 3);
    CHECK(switch_vertex(g, 0).entry(0, 1) == -g.entry(0, 1));
    CHECK(negate(g).charge(3) == -1);
    CHECK(conjugate(g).entry(0, 1) == g.entry(1, 0));
    const LGraph p = permute(g, {3, 2, 1, 0});
    CHECK(p.entry(3, 2) == g.entry(0, 1));
    CHECK(p.charge(0) == 1);
    const LGraph a = add_vertex(g, {QuadInt::integer(r, 1), QuadInt::integer(r, 0), QuadInt::integer(r, 0),
                                    QuadInt::integer(r, 0)},
                                -1);
    CHECK(a.n() == 5);
    CHECK(a.charge(4) == -1);
    CHECK(a.adjacent(0, 4));
}

TEST_CASE("canonical form is invariant and separates inequivalent graphs") {
    const RingSpec r = ring_make(-2);
    const LGraph a = h1(r, QuadInt(r, 0, 1));
    LGraph b = a;
    b.set_charge(1, -1);
    CHECK(is_equivalent(a, negate(a)));
    CHECK_FALSE(is_equivalent(a, b));
    CHECK(is_equivalent(a, conjugate(a)));
    CHECK(is_equivalent(a, switch_vertex(a, 0)));
    const CanonicalForm cf = canonical_form(b);
    CHECK(canonical_key(cf.graph) == cf.key);
    CHECK(is_equivalent(cf.graph, b));
}

TEST_CASE("graph text formats round-trip") {
    std::mt19937_64 rng(47);
    for (std::int64_t d : {-2, -7, -15}) {
        const RingSpec r = ring_make(d);
        const auto pool = label_set(r, LabelTag::full_l).members;
        for (int t = 0; t < 20; ++t) {
            const LGraph g = oracle::random_graph(rng, r, 1 + t % 6, pool, 2);
            CHECK(read_graph(write_graph(g)) == g);
            CHECK(graph_from_json_line(graph_json_line(g)) == g);
            const std::string key = canonical_key(g);
            CHECK(key_from_hex(key_to_hex(key)) == key);
            CHECK(canonical_key(read_graph(write_graph(canonical_form(g).graph))) == key);
        }
    }
    CHECK_THROWS_AS(read_graph("lgraph 2\n{}"), ValidationError);
    CHECK_THROWS_AS(read_graph("lgraph 1\n{\"d\": -2, \"n\": 2, \"charges\": [0, 0], \"upper\": []}"), ValidationError);
    CHECK_THROWS_AS(key_from_hex("abc"), ValidationError);
}

TEST_CASE("excluded-subgraph patterns") {
    const RingSpec r = ring_make(-2);
    const QuadInt w(r, 0, 1);
    const QuadInt one = QuadInt::integer(r, 1);
    LGraph g(r, 4);
    g.set_entry(0, 1, w);
    g.set_entry(0, 2, one);
    g.set_entry(2, 1, -one);
    const auto m = contains_form(g, pattern_x3b());
    REQUIRE(m.has_value());
    CHECK(m->size() == 3);
    CHECK(contains_form(g, pattern_x3b(), 2).has_value());
    CHECK_FALSE(contains_form(g, pattern_x3b(), 3).has_value());
    CHECK_FALSE(contains_form(g, pattern_x3a()).has_value());
    CHECK_FALSE(contains_form(g, pattern_x2()).has_value());
    g.set_charge(1, -1);
    CHECK(contains_form(g, pattern_x2()).has_value());
    CHECK_FALSE(contains_form(g, pattern_x3b()).has_value());
    CHECK_FALSE(contains_form(LGraph(r, 4), pattern_x4b()).has_value());
}
