#include "lehmer/search.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <filesystem>
#include <fstream>
#include <set>

using namespace lehmer;
namespace fs = std::filesystem;

namespace {

std::set<std::string> tau_keys(const std::vector<SearchRound>& rounds, int n_max) {
    std::set<std::string> out;
    for (const auto& r : rounds) {
        if (r.n > n_max) continue;
        for (const auto& m : r.tau) out.insert(std::to_string(r.n) + ":" + m.key);
    }
    return out;
}

std::vector<SearchRound> run(std::int64_t d, int n_max, SearchMode mode, int jobs = 1) {
    SearchOptions o;
    o.d = d;
    o.n_max = n_max;
    o.mode = mode;
    o.jobs = jobs;
    return run_small_search(o);
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lehmer_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("seed graphs") {
    for (std::int64_t d : {-2, -7}) {
        const RingSpec r = ring_make(d);
        const auto seeds = seed_graphs(r);
        REQUIRE(seeds.size() == 3);
        for (const auto& g : seeds) {
            CHECK(g.n() == 2);
            CHECK(g.norm(0, 1) == 2);
            CHECK(is_cyclotomic(g));
        }
        CHECK(is_minimal_noncyclotomic(seed_h1(r)));
    }
    CHECK_THROWS_AS(seed_graphs(ring_make(-5)), ValidationError);
}

TEST_CASE("H1 has Mahler measure 1.8832") {
    for (std::int64_t d : {-2, -7}) {
        const MahlerResult m = mahler_real_rooted(char_poly(seed_h1(ring_make(d))), parse_rational("1e-9"));
        CHECK(m.lower > parse_rational("1.8822"));
        CHECK(m.upper < parse_rational("1.8842"));
        CHECK(m.lower.get_d() == doctest::Approx(oracle::mahler_from_spectrum(oracle::eigenvalues(seed_h1(ring_make(d))))));
    }
}

TEST_CASE("round plans") {
    const RingSpec r = ring_make(-2);
    const RoundPlan full = round_plan(r, 5, SearchMode::full);
    CHECK_FALSE(full.filters.any());
    REQUIRE(full.steps.size() == 1);
    CHECK(full.steps[0].charges == std::vector<std::int64_t>{0, 1, -1});
    const RoundPlan p6 = round_plan(r, 6, SearchMode::pruned);
    CHECK(p6.filters.x2);
    CHECK(p6.filters.x3b);
    CHECK_FALSE(p6.filters.x4b);
    CHECK(p6.steps.size() == 2);
    const RoundPlan p8 = round_plan(r, 8, SearchMode::pruned);
    CHECK(p8.capacity);
    CHECK(p8.filters.degree_cap);
    const RoundPlan p10 = round_plan(r, 10, SearchMode::pruned);
    CHECK(p10.filters.x4b);
    REQUIRE(p10.steps.size() == 4);
    CHECK(p10.steps[3].mixed);
}

TEST_CASE("full search counts for n <= 6") {
    const std::vector<std::size_t> expect2{34, 51, 14, 12};
    const std::vector<std::size_t> expect7{67, 61, 25, 17};
    for (std::int64_t d : {-2, -7}) {
        const auto rounds = run(d, 6, SearchMode::full);
        REQUIRE(rounds.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(rounds[i].n == static_cast<int>(i) + 3);
            CHECK(rounds[i].tau.size() == (d == -2 ? expect2 : expect7)[i]);
            for (const auto& m : rounds[i].tau) {
                CHECK(m.graph.n() == rounds[i].n);
                CHECK(m.mahler.lower > mpq_class(13, 10));
            }
            for (const auto& m : rounds[i].sigma) CHECK(is_cyclotomic(m.graph));
        }
    }
}

TEST_CASE("pruned and full searches give the same minimal noncyclotomic keys for n <= 5") {
    for (std::int64_t d : {-2, -7}) {
        const auto full = run(d, 5, SearchMode::full);
        const auto pruned = run(d, 5, SearchMode::pruned);
        CHECK(tau_keys(full, 5) == tau_keys(pruned, 5));
    }
}

TEST_CASE("worker count does not change results") {
    const auto a = run(-7, 7, SearchMode::pruned, 1);
    const auto b = run(-7, 7, SearchMode::pruned, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(round_records(a[i], -7, SearchMode::pruned).size() > 0);
        SearchRound x = a[i], y = b[i];
        x.stats.seconds = y.stats.seconds = 0;
        CHECK(round_records(x, -7, SearchMode::pruned) == round_records(y, -7, SearchMode::pruned));
    }
}

TEST_CASE("record streams round-trip") {
    const auto rounds = run(-2, 4, SearchMode::full);
    for (const auto& r : rounds) {
        const std::string text = round_records(r, -2, SearchMode::full);
        const SearchRound back = parse_round_records(text);
        CHECK(back.n == r.n);
        REQUIRE(back.tau.size() == r.tau.size());
        REQUIRE(back.sigma.size() == r.sigma.size());
        for (std::size_t i = 0; i < r.tau.size(); ++i) {
            CHECK(back.tau[i].key == r.tau[i].key);
            CHECK(canonical_key(back.tau[i].graph) == r.tau[i].key);
            CHECK(back.tau[i].mahler.lower == r.tau[i].mahler.lower);
        }
        CHECK(back.stats.additions == r.stats.additions);
        CHECK(round_records(back, -2, SearchMode::full) == text);
    }
    CHECK_THROWS(parse_round_records("searchrecords 1\n"));
}

TEST_CASE("resume continues after the last complete round") {
    const fs::path dir = scratch("resume");
    SearchOptions o;
    o.d = -2;
    o.n_max = 5;
    o.out = dir;
    run_small_search(o);
    CHECK(fs::exists(dir / "run.json"));
    CHECK(fs::exists(dir / "round_05.records"));
    CHECK_FALSE(fs::exists(dir / "round_06.records"));

    // An interrupted write of round 5 leaves only the temporary file.
    fs::rename(dir / "round_05.records", dir / "round_05.records.tmp");
    std::ofstream(dir / "round_05.records.tmp", std::ios::app) << "{truncated";
    o.n_max = 7;
    o.resume = true;
    int computed = 0;
    o.on_round = [&](const SearchRound&) { ++computed; };
    const auto resumed = run_small_search(o);
    const auto direct = run(-2, 7, SearchMode::pruned);
    CHECK(computed == 3);
    REQUIRE(resumed.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(resumed[i].n == direct[i].n);
        CHECK(tau_keys({resumed[i]}, 10) == tau_keys({direct[i]}, 10));
        CHECK(resumed[i].sigma.size() == direct[i].sigma.size());
    }
    CHECK(slurp(dir / "summary.json").find("searchsummary 1") != std::string::npos);

    SearchOptions other = o;
    other.d = -7;
    CHECK_THROWS_AS(run_small_search(other), ValidationError);
    fs::remove_all(dir);
}

TEST_CASE("search options are validated") {
    SearchOptions o;
    o.n_max = 11;
    CHECK_THROWS_AS(run_small_search(o), ValidationError);
    o.n_max = 7;
    o.mode = SearchMode::full;
    CHECK_THROWS_AS(run_small_search(o), ValidationError);
    o.mode = SearchMode::pruned;
    o.d = -5;
    CHECK_THROWS_AS(run_small_search(o), ValidationError);
    CHECK_THROWS_AS(search_mode_from_string("fast"), ValidationError);
}

TEST_CASE("supersporadic additions to S14 subgraphs with k = 10") {
    const SupersporadicResult r = run_supersporadic(-2, Family::S14, 10, 2);
    CHECK(r.subsets == 1001);
    CHECK(r.connected_classes + r.disconnected_singleton + r.disconnected_pruned > 0);
    CHECK(r.additions > 0);
    CHECK(r.finds.empty());
    const std::string js = supersporadic_json({r});
    CHECK(js.find("\"supersporadic 1\"") != std::string::npos);
    CHECK_THROWS_AS(run_supersporadic(-2, Family::S14, 9), ValidationError);
    CHECK_THROWS_AS(run_supersporadic(-2, Family::S14, 15), ValidationError);
    CHECK_THROWS_AS(run_supersporadic(-5, Family::S14, 10), ValidationError);
    CHECK_THROWS_AS(run_supersporadic(-2, Family::S7, 10), ValidationError);
}
