#include "lehmer/polynomial.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <chrono>
#include <numeric>
#include <random>

using namespace lehmer;

namespace {

IntPoly random_poly(std::mt19937_64& rng, int deg, long bound) {
    std::uniform_int_distribution<long> u(-bound, bound);
    std::vector<mpz_class> c;
    for (int i = 0; i < deg; ++i) c.emplace_back(u(rng));
    c.emplace_back(1);
    return IntPoly(c);
}

bool inside(const MahlerResult& m, double v, double slack) {
    return mpq_class(v + slack) >= m.lower && mpq_class(v - slack) <= m.upper;
}

int totient(int m) {
    int t = 0;
    for (int k = 1; k <= m; ++k) t += std::gcd(k, m) == 1;
    return t;
}

}  // namespace

TEST_CASE("IntPoly arithmetic and normal form") {
    const IntPoly p{1, 2, 0, 0};
    CHECK(p.degree() == 1);
    CHECK(IntPoly{}.degree() == -1);
    CHECK((IntPoly{-1, 1} * IntPoly{1, 1}) == IntPoly{-1, 0, 1});
    CHECK((IntPoly{1, 1} - IntPoly{1, 1}).is_zero());
    CHECK(IntPoly{1, 2, 3}.derivative() == IntPoly{2, 6});
    CHECK(IntPoly{1, 2, 3}.reflect() == IntPoly{1, -2, 3});
    CHECK(IntPoly{0, 0, 1}.shift(1) == IntPoly{1, 2, 1});
    CHECK(IntPoly{2, 4, -6}.primitive() == IntPoly{-1, -2, 3});
    CHECK(exact_divide(IntPoly{-1, 0, 1}, IntPoly{1, 1}) == IntPoly{-1, 1});
    CHECK_FALSE(exact_divide(IntPoly{1, 0, 1}, IntPoly{1, 1}).has_value());
}

TEST_CASE("squarefree decomposition reconstructs the input") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const IntPoly a = random_poly(rng, 2, 3);
        const IntPoly b = random_poly(rng, 1, 3);
        const IntPoly p = a * b * b * b;
        IntPoly prod{1};
        for (const auto& [q, e] : squarefree_decomposition(p)) {
            for (int i = 0; i < e; ++i) prod = prod * q;
        }
        CHECK(prod.primitive() == p.primitive());
    }
}

TEST_CASE("Sturm counts agree with numeric roots") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const IntPoly p = random_poly(rng, 2 + t % 6, 5);
        int expected = 0;
        for (const auto& z : oracle::roots(oracle::to_double(p))) {
            if (std::abs(z.imag()) < 1e-7 && z.real() > -1.5 && z.real() <= 2.5) ++expected;
        }
        const int got = SturmChain(p).count(mpq_class(-3, 2), mpq_class(5, 2));
        // Distinct roots only; the random inputs are squarefree in practice.
        if (squarefree_part(p).degree() == p.degree()) CHECK(got == expected);
    }
}

TEST_CASE("cauchy_bound encloses every root") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const IntPoly p = random_poly(rng, 6, 20);
        const double b = cauchy_bound(p).get_d();
        for (const auto& z : oracle::roots(oracle::to_double(p))) CHECK(std::abs(z) < b);
    }
}

TEST_CASE("isolating intervals are disjoint and narrow") {
    const IntPoly p = IntPoly{-1, 0, 1} * IntPoly{-2, 0, 1} * IntPoly{-2, 0, 1};
    const auto iv = isolate_real_roots(p, mpq_class(1, 1000));
    REQUIRE(iv.size() == 4);
    for (std::size_t i = 0; i < iv.size(); ++i) {
        CHECK(iv[i].hi - iv[i].lo < mpq_class(1, 1000));
        if (i) CHECK(iv[i - 1].hi <= iv[i].lo);
    }
    CHECK(iv[0].multiplicity == 2);
    CHECK(iv[1].multiplicity == 1);
}

TEST_CASE("Mahler measure of Lehmer's polynomial") {
    const auto t0 = std::chrono::steady_clock::now();
    const MahlerResult m = mahler_general(lehmer_polynomial(), parse_rational("1e-9"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(m.certified);
    CHECK(m.lower <= parse_rational("1.17628081825992"));
    CHECK(m.upper >= parse_rational("1.17628081825992"));
    CHECK(m.width() <= parse_rational("1e-6"));
    CHECK(secs < 1.0);
    CHECK(lehmer_constant().upper < mpq_class(13, 10));
}

TEST_CASE("mahler_general agrees with the companion-matrix oracle") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 60; ++t) {
        const IntPoly p = random_poly(rng, 2 + t % 8, 3);
        if (p.coeff(0) == 0) continue;
        const MahlerResult m = mahler_general(p, parse_rational("1e-9"));
        CAPTURE(p.to_string());
        CHECK(m.lower <= m.upper);
        if (m.certified) CHECK(inside(m, oracle::mahler(p), 1e-6));
    }
}

TEST_CASE("mahler_real_rooted agrees with the eigenvalue oracle") {
    // p = prod (x - l_i) for integers l_i; M(z^n p(z + 1/z)) from the spectrum.
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> u(-4, 4);
    for (int t = 0; t < 40; ++t) {
        IntPoly p{1};
        std::vector<double> eig;
        for (int i = 0; i < 1 + t % 5; ++i) {
            const long l = u(rng);
            p = p * IntPoly{-l, 1};
            eig.push_back(static_cast<double>(l));
        }
        const MahlerResult m = mahler_real_rooted(p, parse_rational("1e-9"));
        CHECK(m.width() <= parse_rational("1e-9"));
        CHECK(inside(m, oracle::mahler_from_spectrum(eig), 1e-9));
    }
}

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_polynomial(1) == IntPoly{-1, 1});
    CHECK(cyclotomic_polynomial(6) == IntPoly{1, -1, 1});
    for (int m = 1; m <= 40; ++m) {
        const IntPoly p = cyclotomic_polynomial(m);
        CHECK(p.degree() == totient(m));
        CHECK(is_cyclotomic_product(p));
    }
    CHECK(is_cyclotomic_product(cyclotomic_polynomial(12) * cyclotomic_polynomial(12) * IntPoly{0, 1}));
    CHECK_FALSE(is_cyclotomic_product(lehmer_polynomial()));
    CHECK_FALSE(is_cyclotomic_product(IntPoly{-2, 1}));
}

TEST_CASE("associated reciprocal and trace polynomial are inverse") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 50; ++t) {
        const IntPoly g = random_poly(rng, 1 + t % 7, 4);
        const IntPoly p = associated_reciprocal(g);
        CHECK(p.degree() == 2 * g.degree());
        CHECK(p.is_palindromic());
        CHECK(trace_polynomial(p) == g);
    }
    CHECK_FALSE(trace_polynomial(IntPoly{1, 2, 3}).has_value());
}

TEST_CASE("spectrum within [-2, 2]") {
    CHECK(is_cyclotomic_spectrum(IntPoly{-4, 0, 1}));        // x^2 - 4
    CHECK_FALSE(is_cyclotomic_spectrum(IntPoly{-5, 0, 1}));  // x^2 - 5
    CHECK(is_cyclotomic_spectrum(IntPoly{-2, 0, 1}));
    CHECK_FALSE(is_cyclotomic_spectrum(IntPoly{-3, 1}));
    CHECK(is_cyclotomic_spectrum(IntPoly{0, 0, 1}));
    const MahlerResult m = mahler_real_rooted(IntPoly{0, 2, 1}, parse_rational("1e-9"));
    CHECK(m.lower == 1);
    CHECK(m.upper == 1);
    const std::int64_t c[] = {-4, 0, 1};
    CHECK(spectrum_within_two(c, 2));
}

TEST_CASE("rational parsing and decimal rounding") {
    CHECK(parse_rational("1/1000") == mpq_class(1, 1000));
    CHECK(parse_rational("1e-3") == mpq_class(1, 1000));
    CHECK(parse_rational("0.25") == mpq_class(1, 4));
    CHECK(parse_rational("-2.5") == mpq_class(-5, 2));
    CHECK_THROWS(parse_rational("abc"));
    CHECK(decimal_floor(mpq_class(2, 3), 3) == "0.666");
    CHECK(decimal_ceil(mpq_class(2, 3), 3) == "0.667");
}

TEST_CASE("polynomial files round-trip") {
    const IntPoly p = lehmer_polynomial();
    CHECK(read_poly(write_poly(p)) == p);
    CHECK(read_poly("1 1 0 -1 -1 -1 -1 -1 0 1 1") == p);
    CHECK_THROWS_AS(read_poly("1 x 2"), ValidationError);
    CHECK_THROWS_AS(read_poly("0 0"), ValidationError);
}
