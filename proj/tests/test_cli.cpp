#include "lehmer/lgraph.hpp"
#include "lehmer/polynomial.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(LEHMER_CLI) + " " + args + " 2>&1";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / "lehmer_cli_test";
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("ring --d -2 --bogus").code == 2);
    CHECK(run("ring --d -1 --norm 1").code == 2);
    CHECK(run("ring --d -4 --norm 1").code == 2);
    CHECK(run("search --d -2 --max-n 7 --mode full").code == 2);
    CHECK(run("search --d -5 --max-n 4").code == 2);
    CHECK(run("mahler --poly /nonexistent/file").code == 2);
    CHECK(run("supersporadic --d -2 --base S14 --k 9").code == 2);
}

TEST_CASE("ring subcommand") {
    const Result r = run("ring --d -7 --norm 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("sqrt") != std::string::npos);
    CHECK(run("ring --d -2 --a 1,1 --b 1,-1 --op mul").code == 0);
}

TEST_CASE("mahler on Lehmer's polynomial") {
    const fs::path f = scratch() / "lehmer.txt";
    write(f, lehmer::write_poly(lehmer::lehmer_polynomial()));
    const Result r = run("mahler --poly " + f.string() + " --tol 1e-9");
    CHECK(r.code == 0);
    CHECK(r.out.find("1.17628081") != std::string::npos);
    write(f, "intpoly 1\n1 x 2\n");
    CHECK(run("mahler --poly " + f.string()).code == 2);
}

TEST_CASE("graph subcommands") {
    const lehmer::RingSpec r = lehmer::ring_make(-2);
    lehmer::LGraph h1(r, 2);
    h1.set_charge(0, 1);
    h1.set_charge(1, 1);
    h1.set_entry(0, 1, lehmer::QuadInt(r, 0, 1));
    const fs::path g = scratch() / "h1.graph";
    write(g, lehmer::write_graph(h1));
    const Result c = run("cyclo --graph " + g.string());
    CHECK(c.code == 0);
    CHECK(c.out.find("noncyclotomic") != std::string::npos);
    CHECK(c.out.find("1.883") != std::string::npos);
    CHECK(run("minimal --graph " + g.string()).out.find("minimal noncyclotomic") != std::string::npos);

    const fs::path g2 = scratch() / "h1b.graph";
    write(g2, lehmer::write_graph(lehmer::negate(lehmer::switch_vertex(h1, 1))));
    const Result e = run("canon --graph " + g.string() + " --equiv " + g2.string());
    CHECK(e.code == 0);
    CHECK(e.out.find("equivalent") != std::string::npos);

    write(g2, "lgraph 1\n{\"d\": -2, \"n\": 2}\n");
    CHECK(run("cyclo --graph " + g2.string()).code == 2);
}

TEST_CASE("search writes records and summaries") {
    const fs::path dir = scratch() / "search";
    fs::remove_all(dir);
    const Result r = run("search --d -2 --max-n 6 --mode full --out " + dir.string());
    CHECK(r.code == 0);
    for (int n = 3; n <= 6; ++n) CHECK(fs::exists(dir / ("round_0" + std::to_string(n) + ".records")));
    CHECK(fs::exists(dir / "summary.txt"));
    std::ifstream in(dir / "summary.txt");
    const std::string text((std::istreambuf_iterator<char>(in)), {});
    for (const char* count : {" 34 ", " 51 ", " 14 ", " 12 "}) CHECK(text.find(count) != std::string::npos);
    CHECK(run("search --d -2 --max-n 6 --mode pruned --resume --out " + dir.string()).code == 2);
}

TEST_CASE("verify-bounds and certify exit codes") {
    CHECK(run("verify-bounds --d -5").code == 0);
    CHECK(run("verify-bounds --d -7").code == 0);
    // The weight-3 stated bounds are not attained.
    const Result b = run("verify-bounds --d -2");
    CHECK(b.code == 1);
    CHECK(b.out.find("2.5177156") != std::string::npos);

    const Result c = run("certify --d -5");
    CHECK(c.code == 0);
    CHECK(c.out.find("verdict: proved") != std::string::npos);
    const Result m = run("certify --d -7");
    CHECK(m.code == 3);
    CHECK(m.out.find("verdict: incomplete") != std::string::npos);
}

TEST_CASE("families subcommand") {
    CHECK(run("families --list").code == 0);
    CHECK(run("families --family S14 --maximal").code == 0);
    CHECK(run("families --family T2k --k 4 --d -2 --maximal").code == 0);
    CHECK(run("families --family S4_star --d -7 --maximal").code == 2);
}
