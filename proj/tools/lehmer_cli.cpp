// Command-line front end. Exit codes: 0 success, 1 a check did not hold,
// 2 usage or validation error, 3 computation refused.

#include "lehmer/search.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lehmer;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInvalid = 2;
constexpr int kRefused = 3;

struct Common {
    std::int64_t d = -2;
    std::string tol = "1e-9";
    int jobs = 1;
};

void add_common(CLI::App* app, Common& c, bool with_d = true, bool with_jobs = false) {
    if (with_d) app->add_option("--d", c.d, "ring discriminant parameter (squarefree, negative, not -1 or -3)");
    app->add_option("--tol", c.tol, "enclosure width for Mahler measures")->capture_default_str();
    if (with_jobs) app->add_option("--jobs", c.jobs, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
}

mpq_class tolerance(const Common& c) {
    mpq_class t = parse_rational(c.tol);
    if (t <= 0) throw ValidationError("--tol must be positive");
    return t;
}

std::string enclosure(const MahlerResult& m) { return "M in " + m.decimal(12); }

QuadInt parse_element(const RingSpec& r, const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ValidationError("ring element must be given as x,y");
    try {
        return QuadInt(r, std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1)));
    } catch (const std::logic_error&) {
        throw ValidationError("bad ring element '" + s + "'");
    }
}

LabelTag parse_tag(const std::string& s) {
    static const std::map<std::string, LabelTag> tags = {
        {"L1", LabelTag::level1},   {"L2", LabelTag::level2},      {"L3", LabelTag::level3},
        {"L4", LabelTag::level4},   {"L", LabelTag::full_l},       {"full", LabelTag::full_l},
        {"L'", LabelTag::l_prime},  {"lprime", LabelTag::l_prime}, {"L1+0", LabelTag::l1_zero},
        {"l1", LabelTag::l1_zero},  {"L2+0", LabelTag::l2_zero},   {"l2", LabelTag::l2_zero},
    };
    const auto it = tags.find(s);
    if (it == tags.end()) throw ValidationError("unknown label set '" + s + "'");
    return it->second;
}

std::string list(const std::vector<QuadInt>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].to_string();
    return s;
}

// ------------------------------------------------------------------- verbs

struct RingArgs {
    Common c;
    std::optional<std::int64_t> norm;
    std::string labels;
    std::string a, b, op;
};

int run_ring(const RingArgs& a) {
    const RingSpec r = ring_make(a.c.d);
    std::cout << "ring d=" << r.d << " s=" << r.s << "\n";
    if (a.norm) std::cout << "norm " << *a.norm << ": " << list(enumerate_norm(r, *a.norm)) << "\n";
    if (!a.labels.empty()) {
        const auto ls = label_set(r, parse_tag(a.labels));
        std::cout << to_string(ls.tag) << " (" << ls.size() << "): " << list(ls.members) << "\n";
    }
    if (a.norm || !a.labels.empty() || !a.a.empty()) {
        if (!a.a.empty()) {
            const QuadInt x = parse_element(r, a.a);
            std::cout << "a = " << x << "  norm " << x.norm() << "  conjugate " << x.conjugate() << "\n";
            if (!a.op.empty()) {
                if (a.b.empty()) throw ValidationError("--op needs --b");
                const QuadInt y = parse_element(r, a.b);
                const ArithOp op = a.op == "add" ? ArithOp::add : a.op == "sub" ? ArithOp::sub : ArithOp::mul;
                std::cout << "a " << a.op << " b = " << arith(x, y, op) << "\n";
            }
        }
        return kOk;
    }
    for (LabelTag t : {LabelTag::level1, LabelTag::level2, LabelTag::level3, LabelTag::level4}) {
        const auto ls = label_set(r, t);
        std::cout << to_string(t) << " (" << ls.size() << "): " << list(ls.members) << "\n";
    }
    return kOk;
}

struct MahlerArgs {
    Common c;
    std::string poly;
    bool charpoly = false;
};

int run_mahler(const MahlerArgs& a) {
    const IntPoly p = read_poly(read_file(a.poly));
    const mpq_class tol = tolerance(a.c);
    const MahlerResult m = a.charpoly ? mahler_real_rooted(p, tol) : mahler_general(p, tol);
    std::cout << "polynomial: " << p.to_string() << "\n";
    if (a.charpoly) std::cout << "read as a characteristic polynomial (measure of z^n p(z + 1/z))\n";
    std::cout << enclosure(m) << "\n";
    std::cout << "lower " << m.lower.get_str() << "\nupper " << m.upper.get_str() << "\n";
    if (!m.certified) {
        std::cout << "not certified: complex roots off the unit circle were located numerically\n";
        return kRefused;
    }
    std::cout << "certified\n";
    return kOk;
}

struct GraphArgs {
    Common c;
    std::string graph;
    std::string other;
};

int run_cyclo(const GraphArgs& a) {
    const LGraph g = read_graph(read_file(a.graph));
    const IntPoly cp = char_poly(g);
    std::cout << "characteristic polynomial: " << cp.to_string() << "\n";
    if (is_cyclotomic(g)) {
        std::cout << "cyclotomic\nM = 1\n";
        return kOk;
    }
    std::cout << "noncyclotomic\n" << enclosure(mahler_real_rooted(cp, tolerance(a.c))) << "\n";
    return kOk;
}

int run_minimal(const GraphArgs& a) {
    const LGraph g = read_graph(read_file(a.graph));
    if (is_cyclotomic(g)) {
        std::cout << "cyclotomic, not minimal noncyclotomic\n";
        return kOk;
    }
    const bool minimal = is_minimal_noncyclotomic(g);
    std::cout << (minimal ? "minimal noncyclotomic" : "noncyclotomic, not minimal") << "\n";
    std::cout << enclosure(mahler_real_rooted(char_poly(g), tolerance(a.c))) << "\n";
    if (!minimal) {
        for (int u = 0; u < g.n(); ++u) {
            if (!is_cyclotomic(delete_vertex(g, u))) {
                std::cout << "noncyclotomic after deleting vertex " << u << "\n";
                break;
            }
        }
    }
    return kOk;
}

int run_canon(const GraphArgs& a) {
    const LGraph g = read_graph(read_file(a.graph));
    const auto cf = canonical_form(g);
    std::cout << "key " << key_to_hex(cf.key) << "\n" << write_graph(cf.graph);
    if (!a.other.empty()) {
        const LGraph h = read_graph(read_file(a.other));
        std::cout << (is_equivalent(g, h) ? "equivalent" : "not equivalent") << "\n";
    }
    return kOk;
}

struct GrowArgs {
    Common c;
    std::string graph;
    std::string pool = "lprime";
    std::optional<std::int64_t> bound;
    std::vector<std::int64_t> charges{0, 1, -1};
    std::vector<std::string> filters;
    std::string out;
};

int run_grow(const GrowArgs& a) {
    const LGraph base = read_graph(read_file(a.graph));
    if (!is_cyclotomic(base)) throw ValidationError("grow needs a cyclotomic base graph");
    for (auto x : a.charges) {
        if (x < -1 || x > 1) throw ValidationError("charges must lie in {-1, 0, 1}");
    }
    GrowthFilterSet f;
    for (const auto& name : a.filters) {
        if (name == "x2") f.x2 = true;
        else if (name == "x3a") f.x3a = true;
        else if (name == "x3b") f.x3b = true;
        else if (name == "x4a") f.x4a = true;
        else if (name == "x4b") f.x4b = true;
        else if (name == "degree") f.degree_cap = true;
        else throw ValidationError("unknown filter '" + name + "'");
    }
    const RingSpec& r = base.ring();
    const int n = base.n();
    const AdditionProbe probe(base);
    std::map<std::string, LGraph> sigma, tau;
    std::map<std::string, std::size_t> pruned;
    std::size_t additions = 0;
    std::vector<std::int64_t> cx(static_cast<std::size_t>(n)), cy(static_cast<std::size_t>(n));
    ColumnSpec spec{n, label_set(r, parse_tag(a.pool)).members, true, a.bound, {}};
    enumerate_columns(spec, [&](const std::vector<QuadInt>& c) {
        for (int i = 0; i < n; ++i) {
            cx[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)].x();
            cy[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)].y();
        }
        for (auto x : a.charges) {
            ++additions;
            const LGraph g = add_vertex(base, c, x);
            if (f.any()) {
                const auto v = apply_filters(g, f, n);
                if (!v.keep) {
                    ++pruned[v.reason];
                    continue;
                }
            }
            if (probe.cyclotomic(cx.data(), cy.data(), x)) {
                auto cf = canonical_form(g);
                sigma.emplace(cf.key, cf.graph);
            } else if (probe.minimal(cx.data(), cy.data(), x)) {
                auto cf = canonical_form(g);
                tau.emplace(cf.key, cf.graph);
            }
        }
        return true;
    });
    SearchRound round;
    round.n = n + 1;
    round.stats.additions = additions;
    round.stats.pruned = pruned;
    const mpq_class tol = tolerance(a.c);
    for (auto& [k, g] : sigma) round.sigma.push_back(Member{k, g, MahlerResult{}});
    for (auto& [k, g] : tau) {
        MahlerResult m = mahler_real_rooted(char_poly(g), tol);
        m.witnesses.clear();
        round.tau.push_back(Member{k, g, m});
    }
    std::cout << "additions " << additions << "\n";
    for (const auto& [reason, count] : pruned) std::cout << "pruned " << reason << " " << count << "\n";
    std::cout << "cyclotomic classes " << round.sigma.size() << "\n";
    std::cout << "minimal noncyclotomic classes " << round.tau.size() << "\n";
    for (const auto& m : round.tau) std::cout << "  " << graph_json_line(m.graph) << "  " << enclosure(m.mahler) << "\n";
    if (!a.out.empty()) write_file(a.out, round_records(round, r.d, SearchMode::full));
    return kOk;
}

struct SearchArgs {
    Common c;
    int max_n = 6;
    std::string mode = "pruned";
    std::string out;
    bool resume = false;
};

int run_search(const SearchArgs& a) {
    SearchOptions o;
    o.d = a.c.d;
    o.n_max = a.max_n;
    o.mode = search_mode_from_string(a.mode);
    o.jobs = a.c.jobs;
    o.tol = tolerance(a.c);
    o.resume = a.resume;
    if (!a.out.empty()) o.out = a.out;
    if (a.resume && a.out.empty()) throw ValidationError("--resume needs --out");
    o.on_round = [](const SearchRound& r) {
        std::cerr << "round " << r.n << ": |Sigma| " << r.sigma.size() << ", |T| " << r.tau.size() << ", "
                  << r.stats.seconds << " s\n";
    };
    const auto rounds = run_small_search(o);
    std::cout << summary_text(rounds, o.d, o.mode);
    return kOk;
}

struct SporadicArgs {
    Common c;
    std::string base = "all";
    std::string k = "all";
    std::string out;
};

int run_sporadic(const SporadicArgs& a) {
    std::vector<Family> bases;
    if (a.base == "all") {
        bases = {Family::S14, Family::S16};
    } else {
        const auto f = family_from_name(a.base);
        if (!f) throw ValidationError("unknown base '" + a.base + "'");
        bases = {*f};
    }
    std::vector<SupersporadicResult> results;
    std::size_t finds = 0;
    for (Family b : bases) {
        const int size = b == Family::S14 ? 14 : 16;
        std::vector<int> ks;
        if (a.k == "all") {
            for (int k = 10; k <= size; ++k) ks.push_back(k);
        } else {
            try {
                ks = {std::stoi(a.k)};
            } catch (const std::logic_error&) {
                throw ValidationError("--k must be an integer or 'all'");
            }
        }
        for (int k : ks) {
            results.push_back(run_supersporadic(a.c.d, b, k, a.c.jobs));
            const auto& r = results.back();
            finds += r.finds.size();
            std::cout << family_name(b) << " k=" << k << ": " << r.subsets << " subsets, " << r.connected_classes
                      << " connected / " << r.disconnected_singleton << " singleton / " << r.disconnected_pruned
                      << " other disconnected classes, " << r.additions << " additions (" << r.pruned_x4b
                      << " X4B), finds " << r.finds.size() << "\n";
        }
    }
    if (!a.out.empty()) write_file(a.out, supersporadic_json(results));
    std::cout << "total finds " << finds << "\n";
    return kOk;
}

struct FamilyArgs {
    Common c;
    std::string family;
    int k = 0;
    bool list = false;
    bool maximal = false;
    bool parity = false;
    std::string embed;
    int k_max = 8;
    std::string out;
};

int run_families(const FamilyArgs& a) {
    if (a.list || a.family.empty()) {
        for (Family f : all_families()) {
            std::cout << family_name(f);
            if (family_has_k(f)) std::cout << " (k >= " << family_min_k(f) << ")";
            std::cout << (family_applicable(f, a.c.d) ? "" : "  [not over this ring]") << "\n";
        }
        return kOk;
    }
    const auto fam = family_from_name(a.family);
    if (!fam) throw ValidationError("unknown family '" + a.family + "'");
    if (!a.embed.empty()) {
        const LGraph g = read_graph(read_file(a.embed));
        const auto e = embeds_in_family(g, *fam, a.k_max);
        if (!e) {
            std::cout << "no embedding in " << a.family << " with k <= " << a.k_max << "\n";
            return kCheckFailed;
        }
        std::cout << "embeds in " << a.family << " k=" << e->k << " on vertices";
        for (int v : e->vertices) std::cout << " " << v;
        std::cout << "\n";
        return kOk;
    }
    const Drawing dr = generate(FamilySpec{*fam, a.k, ring_make(a.c.d)});
    std::cout << write_graph(dr.graph);
    if (!a.out.empty()) write_file(a.out, write_graph(dr.graph));
    const bool cyc = is_cyclotomic(dr.graph);
    std::cout << (cyc ? "cyclotomic" : "noncyclotomic") << "\n";
    int code = cyc ? kOk : kCheckFailed;
    if (a.maximal) {
        const bool m = verify_maximal(dr.graph);
        std::cout << (m ? "maximal" : "not maximal") << "\n";
        if (!m) code = kCheckFailed;
    }
    if (a.parity) {
        const auto rep = parity_conditions(dr);
        for (const auto& c : rep.cycles) {
            std::cout << "cycle";
            for (int v : c.cycle) std::cout << " " << v;
            std::cout << "  " << to_string(c.kind) << "  positive " << c.positive << (c.pass ? "  ok" : "  FAIL") << "\n";
        }
        for (const auto& t : rep.triangles) {
            std::cout << "charged triangle";
            for (int v : t.triangle) std::cout << " " << v;
            std::cout << "  counted " << t.counted << (t.pass ? "  ok" : "  FAIL") << "\n";
        }
        std::cout << "parity " << (rep.pass ? "holds" : "fails") << "\n";
        if (!rep.pass) code = kCheckFailed;
    }
    return code;
}

int run_bounds(const Common& c) {
    const auto checks = verify_bounds(c.d, tolerance(c));
    int code = kOk;
    for (const auto& b : checks) {
        std::cout << b.name << ": ";
        if (!b.applicable) {
            std::cout << "not applicable over this ring\n";
            continue;
        }
        std::cout << b.count << " enumerated, " << b.qualifying << " noncyclotomic, minimum "
                  << (b.minimum ? b.minimum->decimal(9) : std::string("-")) << ", stated >= " << decimal_floor(b.threshold, 3)
                  << (b.straddles ? "  STRADDLES" : b.pass ? "  holds" : "  NOT ATTAINED") << "\n";
        if (b.witness) std::cout << "  witness " << graph_json_line(*b.witness) << "\n";
        if (b.straddles) code = std::max(code, kRefused);
        else if (!b.pass) code = std::max(code, kCheckFailed);
    }
    return code;
}

struct CertifyArgs {
    Common c;
    std::string search_dir;
    std::string supersporadic;
    std::string out;
};

int run_certify(const CertifyArgs& a) {
    CertificateInputs in;
    in.tol = tolerance(a.c);
    if (!a.search_dir.empty()) in.search_dir = a.search_dir;
    if (!a.supersporadic.empty()) in.supersporadic_file = a.supersporadic;
    const Certificate cert = emit_certificate(a.c.d, in);
    const std::string text = certificate_text(cert);
    std::cout << text;
    if (!a.out.empty()) write_file(a.out, text);
    return cert.verdict == "proved" ? kOk : kRefused;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyclotomic matrices, Mahler measures and small-measure searches over imaginary quadratic rings",
                 "lehmer"};
    app.require_subcommand(1);

    RingArgs ring;
    auto* c_ring = app.add_subcommand("ring", "ring data, label sets, norm enumeration and arithmetic");
    add_common(c_ring, ring.c);
    c_ring->add_option("--norm", ring.norm, "list the elements of this norm");
    c_ring->add_option("--labels", ring.labels, "label set: L1 L2 L3 L4 L L' L1+0 L2+0");
    c_ring->add_option("--a", ring.a, "element x,y meaning (x + y sqrt d)/s");
    c_ring->add_option("--b", ring.b, "second element x,y");
    c_ring->add_option("--op", ring.op, "add, sub or mul")->check(CLI::IsMember({"add", "sub", "mul"}));

    MahlerArgs mahler;
    auto* c_mahler = app.add_subcommand("mahler", "certified Mahler measure of a polynomial file");
    add_common(c_mahler, mahler.c, false);
    c_mahler->add_option("--poly", mahler.poly, "coefficient file, ascending")->required();
    c_mahler->add_flag("--charpoly", mahler.charpoly, "treat the file as a real-rooted characteristic polynomial");

    GraphArgs cyclo, minimal, canon;
    auto* c_cyclo = app.add_subcommand("cyclo", "cyclotomicity and Mahler measure of a graph file");
    add_common(c_cyclo, cyclo.c, false);
    c_cyclo->add_option("--graph", cyclo.graph, "graph file")->required();
    auto* c_min = app.add_subcommand("minimal", "minimal noncyclotomic test of a graph file");
    add_common(c_min, minimal.c, false);
    c_min->add_option("--graph", minimal.graph, "graph file")->required();
    auto* c_canon = app.add_subcommand("canon", "canonical form and key of a graph file");
    c_canon->add_option("--graph", canon.graph, "graph file")->required();
    c_canon->add_option("--equiv", canon.other, "second graph file to compare");

    GrowArgs grow;
    auto* c_grow = app.add_subcommand("grow", "classify all single-vertex additions to a cyclotomic graph");
    add_common(c_grow, grow.c, false);
    c_grow->add_option("--graph", grow.graph, "base graph file")->required();
    c_grow->add_option("--pool", grow.pool, "column label set: L' L1+0 L2+0 L")->capture_default_str();
    c_grow->add_option("--bound", grow.bound, "bound on the sum of column entry norms");
    c_grow->add_option("--charges", grow.charges, "charges of the new vertex")->delimiter(',')->capture_default_str();
    c_grow->add_option("--filters", grow.filters, "x2,x3a,x3b,x4a,x4b,degree")->delimiter(',');
    c_grow->add_option("--out", grow.out, "record stream file");

    SearchArgs search;
    auto* c_search = app.add_subcommand("search", "round-by-round search from the seed graphs");
    add_common(c_search, search.c, true, true);
    c_search->add_option("--max-n", search.max_n, "last round")->capture_default_str();
    c_search->add_option("--mode", search.mode, "pruned or full")->check(CLI::IsMember({"pruned", "full"}))->capture_default_str();
    c_search->add_option("--out", search.out, "output directory");
    c_search->add_flag("--resume", search.resume, "continue after the last complete round in --out");

    SporadicArgs sporadic;
    auto* c_sp = app.add_subcommand("supersporadic", "additions to large subgraphs of S14 and S16");
    add_common(c_sp, sporadic.c, true, true);
    c_sp->add_option("--base", sporadic.base, "S14, S16 or all")->capture_default_str();
    c_sp->add_option("--k", sporadic.k, "subgraph size or all")->capture_default_str();
    c_sp->add_option("--out", sporadic.out, "JSON result file");

    FamilyArgs fam;
    auto* c_fam = app.add_subcommand("families", "generate and check maximal cyclotomic families");
    add_common(c_fam, fam.c);
    c_fam->add_option("--family", fam.family, "family name");
    c_fam->add_option("--k", fam.k, "size parameter");
    c_fam->add_flag("--list", fam.list, "list the families");
    c_fam->add_flag("--maximal", fam.maximal, "check that no single-vertex addition is cyclotomic");
    c_fam->add_flag("--parity", fam.parity, "check the four-cycle and charged-triangle parity predicates");
    c_fam->add_option("--embed", fam.embed, "graph file to embed in the family");
    c_fam->add_option("--k-max", fam.k_max, "largest member tried by --embed")->capture_default_str();
    c_fam->add_option("--out", fam.out, "write the generated graph");

    Common bounds;
    auto* c_bounds = app.add_subcommand("verify-bounds", "exhaustive sweeps behind the reduction bounds");
    add_common(c_bounds, bounds);

    CertifyArgs cert;
    auto* c_cert = app.add_subcommand("certify", "assemble the case certificate for a ring");
    add_common(c_cert, cert.c);
    c_cert->add_option("--search-dir", cert.search_dir, "search output directory (d = -2, -7)");
    c_cert->add_option("--supersporadic", cert.supersporadic, "supersporadic JSON file (d = -2, -7)");
    c_cert->add_option("--out", cert.out, "write the certificate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*c_ring) return run_ring(ring);
        if (*c_mahler) return run_mahler(mahler);
        if (*c_cyclo) return run_cyclo(cyclo);
        if (*c_min) return run_minimal(minimal);
        if (*c_canon) return run_canon(canon);
        if (*c_grow) return run_grow(grow);
        if (*c_search) return run_search(search);
        if (*c_sp) return run_sporadic(sporadic);
        if (*c_fam) return run_families(fam);
        if (*c_bounds) return run_bounds(bounds);
        if (*c_cert) return run_certify(cert);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRefused;
    }
    return kInvalid;
}
