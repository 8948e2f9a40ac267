#include "lehmer/search.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace lehmer;
namespace fs = std::filesystem;

namespace {

const BoundCheck& find(const std::vector<BoundCheck>& v, const std::string& name) {
    for (const auto& c : v) {
        if (c.name == name) return c;
    }
    throw std::runtime_error("no sweep " + name);
}

double lo(const BoundCheck& c) { return c.minimum->lower.get_d(); }

// Floating-point Mahler measure of a graph; 0 when cyclotomic.
double float_measure(const LGraph& g) {
    const auto eig = oracle::eigenvalues(g);
    for (double l : eig) {
        if (std::abs(l) > 2 + 1e-9) return oracle::mahler_from_spectrum(eig);
    }
    return 0;
}

bool float_minimal(const LGraph& g) {
    if (float_measure(g) == 0) return false;
    for (int v = 0; v < g.n() && g.n() > 1; ++v) {
        if (float_measure(delete_vertex(g, v)) != 0) return false;
    }
    return true;
}

// Least measure of [[b, a], [conj a, c]] with norm a = n, over the given ranges.
double float_pairs(int bmin, int bmax, int cmin, int cmax, int nmin, int nmax) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = nmin; n <= nmax; ++n) {
        for (int b = bmin; b <= bmax; ++b) {
            for (int c = cmin; c <= cmax; ++c) {
                const double t = b + c, disc = std::sqrt((b - c) * (b - c) + 4.0 * n);
                const std::vector<double> eig{(t - disc) / 2, (t + disc) / 2};
                if (std::abs(eig[0]) > 2 + 1e-9 || std::abs(eig[1]) > 2 + 1e-9) {
                    best = std::min(best, oracle::mahler_from_spectrum(eig));
                }
            }
        }
    }
    return best;
}

std::vector<QuadInt> up_to(const RingSpec& r, std::int64_t w) {
    std::vector<QuadInt> out;
    for (const auto& q : label_set(r, LabelTag::full_l).members) {
        if (q.norm() <= w) out.push_back(q);
    }
    return out;
}

// Least measure over an edge (a, b, w) plus a third vertex, by Eigen.
double float_third_vertex(const RingSpec& r, const QuadInt& w, std::int64_t a, std::int64_t b, std::int64_t maxw) {
    double best = std::numeric_limits<double>::infinity();
    const auto labels = up_to(r, maxw);
    for (const auto& p : labels) {
        for (const auto& q : labels) {
            if (p.is_zero() && q.is_zero()) continue;
            for (std::int64_t x = -1; x <= 1; ++x) {
                LGraph g(r, 3);
                g.set_charge(0, a);
                g.set_charge(1, b);
                g.set_charge(2, x);
                g.set_entry(0, 1, w);
                if (!p.is_zero()) g.set_entry(0, 2, p);
                if (!q.is_zero()) g.set_entry(1, 2, q);
                const double m = float_measure(g);
                if (m > 0) best = std::min(best, m);
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("single-entry and two-vertex sweeps agree with closed forms") {
    const auto checks = verify_bounds(-5);
    // x - m has measure (m + sqrt(m^2 - 4)) / 2; least at m = 3.
    CHECK(lo(find(checks, "diagonal>=3")) == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-9));
    CHECK(lo(find(checks, "offdiag-norm>=5")) == doctest::Approx(float_pairs(-2, 2, -2, 2, 5, 12)).epsilon(1e-9));
    CHECK(lo(find(checks, "diagonal=2")) == doctest::Approx(float_pairs(2, 2, -2, 2, 1, 4)).epsilon(1e-9));
    for (const auto& c : checks) {
        CAPTURE(c.name);
        if (!c.applicable) continue;
        REQUIRE(c.minimum.has_value());
        CHECK(c.minimum->width() <= parse_rational("1e-9"));
        CHECK(c.qualifying <= c.count);
    }
}

TEST_CASE("stated thresholds for the first four sweeps hold in every ring") {
    for (std::int64_t d : {-2, -7, -11, -15, -5, -17}) {
        const auto checks = verify_bounds(d);
        for (const char* name : {"diagonal>=3", "offdiag-norm>=5", "diagonal=2", "weight4"}) {
            const BoundCheck& c = find(checks, name);
            CAPTURE(d);
            CAPTURE(name);
            CHECK(c.pass);
            CHECK_FALSE(c.straddles);
        }
    }
    CHECK(find(verify_bounds(-2), "weight4").applicable);
    CHECK_FALSE(find(verify_bounds(-5), "weight3-small").applicable);
    CHECK_FALSE(find(verify_bounds(-7), "weight3-charged-pair").applicable);
}

TEST_CASE("weight-4 sweep minimum matches an Eigen sweep") {
    for (std::int64_t d : {-2, -7, -15}) {
        const RingSpec r = ring_make(d);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : enumerate_norm(r, 4)) {
            for (std::int64_t a = -1; a <= 1; ++a) {
                for (std::int64_t b = -1; b <= 1; ++b) {
                    if (a == 0 && b == 0) continue;
                    LGraph g(r, 2);
                    g.set_charge(0, a);
                    g.set_charge(1, b);
                    g.set_entry(0, 1, w);
                    const double m = float_measure(g);
                    if (m > 0) best = std::min(best, m);
                }
            }
            best = std::min(best, float_third_vertex(r, w, 0, 0, 4));
        }
        const auto checks = verify_bounds(d);
        const BoundCheck& c = find(checks, "weight4");
        CAPTURE(d);
        CHECK(lo(c) == doctest::Approx(best).epsilon(1e-9));
        REQUIRE(c.witness.has_value());
        CHECK(float_measure(*c.witness) == doctest::Approx(best).epsilon(1e-9));
    }
}

// The weight-3 minima lie just below the stated 2.52 and 1.56.
TEST_CASE("weight-3 sweeps match an Eigen sweep, below the stated thresholds") {
    for (std::int64_t d : {-2, -11}) {
        const RingSpec r = ring_make(d);
        double pair = std::numeric_limits<double>::infinity();
        double small = std::numeric_limits<double>::infinity();
        const auto labels = up_to(r, 3);
        for (const auto& w : enumerate_norm(r, 3)) {
            pair = std::min(pair, float_third_vertex(r, w, 1, -1, 3));
            for (std::int64_t a = -1; a <= 1; ++a) {
                for (std::int64_t b = -1; b <= 1; ++b) {
                    LGraph g(r, 2);
                    g.set_charge(0, a);
                    g.set_charge(1, b);
                    g.set_entry(0, 1, w);
                    if ((a != 0 || b != 0) && float_minimal(g)) small = std::min(small, float_measure(g));
                }
            }
            // Subgraphs of S4' with a weight-3 edge, plus one vertex.
            LGraph s4(r, 4);
            s4.set_entry(0, 1, w);
            s4.set_entry(2, 3, -w);
            s4.set_entry(0, 2, QuadInt::integer(r, 1));
            s4.set_entry(1, 3, QuadInt::integer(r, 1));
            for (int mask = 1; mask < 16; ++mask) {
                if ((mask & 3) != 3 && (mask & 12) != 12) continue;
                std::vector<int> vs;
                for (int i = 0; i < 4; ++i) {
                    if (mask & (1 << i)) vs.push_back(i);
                }
                const LGraph h = induced_subgraph(s4, vs);
                const int n = h.n();
                std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
                for (;;) {
                    std::vector<QuadInt> col;
                    bool nonzero = false;
                    for (std::size_t i : idx) {
                        col.push_back(labels[i]);
                        nonzero |= !labels[i].is_zero();
                    }
                    if (nonzero) {
                        for (std::int64_t x = -1; x <= 1; ++x) {
                            const LGraph g = add_vertex(h, col, x);
                            if (float_minimal(g)) small = std::min(small, float_measure(g));
                        }
                    }
                    std::size_t k = 0;
                    while (k < idx.size() && ++idx[k] == labels.size()) idx[k++] = 0;
                    if (k == idx.size()) break;
                }
            }
        }
        const auto checks = verify_bounds(d);
        const BoundCheck& cp = find(checks, "weight3-charged-pair");
        const BoundCheck& cs = find(checks, "weight3-small");
        CAPTURE(d);
        CHECK(lo(cp) == doctest::Approx(pair).epsilon(1e-9));
        CHECK(lo(cs) == doctest::Approx(small).epsilon(1e-9));
        // Frozen from a separate numpy/sympy evaluation of the two witnesses.
        CHECK(lo(cp) == doctest::Approx(2.517715604026434).epsilon(1e-9));
        CHECK(lo(cs) == doctest::Approx(1.5560301913226835).epsilon(1e-9));
        CHECK_FALSE(cp.pass);
        CHECK_FALSE(cs.pass);
        CHECK_FALSE(cp.straddles);
        CHECK_FALSE(cs.straddles);
        CHECK(char_poly(*cp.witness) == IntPoly{1, -5, 0, 1});
        CHECK(char_poly(*cs.witness) == IntPoly{-3, -4, 1, 1});
    }
}

TEST_CASE("certificates for rings without search artifacts") {
    for (std::int64_t d : {-11, -15, -5, -17}) {
        const Certificate c = emit_certificate(d, {});
        CAPTURE(d);
        CHECK(c.verdict == "proved");
        bool cited = false;
        int certified = 0;
        for (const auto& cs : c.cases) {
            CHECK(cs.discharged);
            certified += cs.fact.find("certified minimum") != std::string::npos;
            cited |= cs.provenance == Provenance::cited;
        }
        CHECK(cited);
        CHECK(certified >= (d == -5 || d == -17 ? 2 : 4));
        const std::string text = certificate_text(c);
        CHECK(text.rfind("certificate 1\n", 0) == 0);
        CHECK(text.find("provenance: cited") != std::string::npos);
        CHECK(text.find("verdict: proved") != std::string::npos);
    }
}

TEST_CASE("certificates for d = -2, -7 need the search and supersporadic artifacts") {
    for (std::int64_t d : {-2, -7}) {
        CAPTURE(d);
        const Certificate bare = emit_certificate(d, {});
        CHECK(bare.verdict == "incomplete");

        const fs::path dir = fs::temp_directory_path() / ("lehmer_cert_" + std::to_string(-d));
        fs::remove_all(dir);
        SearchOptions o;
        o.d = d;
        o.n_max = 10;
        o.out = dir / "search";
        run_small_search(o);
        std::vector<SupersporadicResult> ss;
        for (Family base : {Family::S14, Family::S16}) {
            for (int k = 10; k <= (base == Family::S14 ? 14 : 16); ++k) ss.push_back(run_supersporadic(d, base, k, 2));
        }
        std::ofstream(dir / "ss.json") << supersporadic_json(ss);

        CertificateInputs in;
        in.search_dir = dir / "search";
        CHECK(emit_certificate(d, in).verdict == "incomplete");
        in.supersporadic_file = dir / "ss.json";
        const Certificate full = emit_certificate(d, in);
        CHECK(full.verdict == "proved");
        for (const auto& cs : full.cases) CHECK(cs.discharged);

        // Missing round file.
        fs::rename(dir / "search" / "round_09.records", dir / "r9");
        CHECK(emit_certificate(d, in).verdict == "incomplete");
        fs::rename(dir / "r9", dir / "search" / "round_09.records");

        // A search directory for the other ring.
        if (d == -7) {
            CertificateInputs wrong = in;
            wrong.search_dir = fs::temp_directory_path() / "lehmer_cert_2" / "search";
            REQUIRE(fs::exists(*wrong.search_dir));
            CHECK(emit_certificate(d, wrong).verdict == "incomplete");
        }

        // A tampered record.
        const fs::path r3 = dir / "search" / "round_03.records";
        std::ifstream in3(r3);
        std::string text((std::istreambuf_iterator<char>(in3)), {});
        in3.close();
        const auto pos = text.find("\"charges\":[", text.find("\"class\":\"tau\""));
        REQUIRE(pos != std::string::npos);
        const auto digit = text.find_first_of("01", pos + 11);
        text[digit] = text[digit] == '0' ? '1' : '0';
        std::ofstream(r3) << text;
        CHECK(emit_certificate(d, in).verdict == "incomplete");
    }
    fs::remove_all(fs::temp_directory_path() / "lehmer_cert_2");
    fs::remove_all(fs::temp_directory_path() / "lehmer_cert_7");
}
