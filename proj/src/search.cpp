#include "lehmer/search.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace lehmer {

namespace {

QuadInt weight2_label(const RingSpec& r) {
    if (r.d == -2) return QuadInt(r, 0, 1);
    if (r.d == -7) return QuadInt(r, 1, 1);
    throw ValidationError("the search is defined for d = -2, -7");
}

LGraph pair_graph(const RingSpec& r, std::int64_t a, std::int64_t b) {
    LGraph g(r, 2);
    g.set_charge(0, a);
    g.set_charge(1, b);
    g.set_entry(0, 1, weight2_label(r));
    return g;
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

mpq_class q_parse(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ValidationError("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

void finish_stats(SearchRound& r) {
    r.stats.min_mahler.reset();
    r.stats.max_mahler.reset();
    for (const auto& m : r.tau) {
        if (!r.stats.min_mahler || m.mahler.upper < r.stats.min_mahler->upper) r.stats.min_mahler = m.mahler;
        if (!r.stats.max_mahler || m.mahler.lower > r.stats.max_mahler->lower) r.stats.max_mahler = m.mahler;
    }
}

mpq_class least_lower(const SearchRound& r) {
    mpq_class lo = 0;
    bool first = true;
    for (const auto& m : r.tau) {
        if (first || m.mahler.lower < lo) lo = m.mahler.lower;
        first = false;
    }
    return lo;
}

void write_atomic(const std::filesystem::path& file, const std::string& text) {
    const auto tmp = std::filesystem::path(file.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path round_file(const std::filesystem::path& dir, int n) {
    char name[32];
    std::snprintf(name, sizeof name, "round_%02d.records", n);
    return dir / name;
}

}  // namespace

std::vector<LGraph> seed_graphs(const RingSpec& ring) {
    return {pair_graph(ring, 1, -1), pair_graph(ring, 0, 0), pair_graph(ring, 1, 0)};
}

LGraph seed_h1(const RingSpec& ring) { return pair_graph(ring, 1, 1); }

std::string to_string(SearchMode m) { return m == SearchMode::full ? "full" : "pruned"; }

SearchMode search_mode_from_string(const std::string& s) {
    if (s == "full") return SearchMode::full;
    if (s == "pruned") return SearchMode::pruned;
    throw ValidationError("mode must be pruned or full");
}

RoundPlan round_plan(const RingSpec& ring, int n, SearchMode mode) {
    if (n < 3) throw ValidationError("rounds start at n = 3");
    const auto lp = label_set(ring, LabelTag::l_prime).members;
    const auto l1 = label_set(ring, LabelTag::l1_zero).members;
    const auto l2 = label_set(ring, LabelTag::l2_zero).members;
    RoundPlan p;
    p.n = n;
    if (mode == SearchMode::full) {
        p.steps.push_back({"L'", lp, std::nullopt, {0, 1, -1}});
        return p;
    }
    p.filters.x3a = true;
    p.filters.x4a = true;
    if (n <= 5) {
        p.steps.push_back({"L'", lp, std::nullopt, {0, 1, -1}});
        return p;
    }
    // A minimal noncyclotomic graph containing X2 or X3B has at most 5 vertices.
    p.filters.x2 = true;
    p.filters.x3b = true;
    if (n == 6) {
        p.steps.push_back({"L'", lp, std::nullopt, {0}});
        p.steps.push_back({"L1+0", l1, std::nullopt, {1, -1}});
        return p;
    }
    p.filters.degree_cap = true;
    p.capacity = true;
    if (n <= 9) {
        p.steps.push_back({"L'", lp, 4, {0}});
        p.steps.push_back({"L1+0", l1, 3, {1, -1}});
        return p;
    }
    // A minimal noncyclotomic graph containing X4B has at most 9 vertices.
    p.filters.x4b = true;
    p.steps.push_back({"L1+0", l1, 3, {1, -1}});
    p.steps.push_back({"L1+0", l1, 4, {0}});
    p.steps.push_back({"L2+0", l2, 4, {0}});
    GrowthStep mixed{"L'", lp, 4, {0}};
    mixed.mixed = true;
    p.steps.push_back(mixed);
    return p;
}

// ------------------------------------------------------------------- round

namespace {

struct WorkerOut {
    std::map<std::string, LGraph> sigma;
    std::map<std::string, LGraph> tau;
    std::size_t additions = 0;
    std::size_t cyclotomic = 0;
    std::map<std::string, std::size_t> pruned;
};

void grow_from(const LGraph& base, const RoundPlan& plan, WorkerOut& out) {
    const RingSpec& r = base.ring();
    const int m = base.n();
    const AdditionProbe probe(base);
    const std::int64_t s2 = r.s * r.s;
    GrowthFilterSet patterns = plan.filters;
    patterns.degree_cap = false;
    const bool use_patterns = patterns.any();
    std::vector<std::int64_t> caps;
    if (plan.capacity) {
        for (int i = 0; i < m; ++i) caps.push_back(std::max<std::int64_t>(0, 4 - probe.weighted_degree(i)));
    }
    std::vector<std::int64_t> cx(static_cast<std::size_t>(m));
    std::vector<std::int64_t> cy(static_cast<std::size_t>(m));
    std::vector<std::int64_t> nm(static_cast<std::size_t>(m));
    for (const auto& step : plan.steps) {
        ColumnSpec spec{m, step.pool, true, step.bound, caps};
        enumerate_columns(spec, [&](const std::vector<QuadInt>& c) {
            std::int64_t sum = 0;
            bool has1 = false;
            bool has2 = false;
            for (int i = 0; i < m; ++i) {
                const auto& q = c[static_cast<std::size_t>(i)];
                cx[static_cast<std::size_t>(i)] = q.x();
                cy[static_cast<std::size_t>(i)] = q.y();
                nm[static_cast<std::size_t>(i)] = (q.x() * q.x() - r.d * q.y() * q.y()) / s2;
                sum += nm[static_cast<std::size_t>(i)];
                has1 |= nm[static_cast<std::size_t>(i)] == 1;
                has2 |= nm[static_cast<std::size_t>(i)] == 2;
            }
            if (step.mixed && !(has1 && has2)) return true;
            for (std::int64_t x : step.charges) {
                ++out.additions;
                if (plan.filters.degree_cap) {
                    bool over = x * x + sum > 4;
                    for (int i = 0; i < m && !over; ++i) {
                        over = probe.weighted_degree(i) + nm[static_cast<std::size_t>(i)] > 4;
                    }
                    if (over) {
                        ++out.pruned["degree"];
                        continue;
                    }
                }
                std::optional<LGraph> g;
                if (use_patterns) {
                    g = add_vertex(base, c, x);
                    const auto v = apply_filters(*g, patterns, m);
                    if (!v.keep) {
                        ++out.pruned[v.reason];
                        continue;
                    }
                }
                if (probe.cyclotomic(cx.data(), cy.data(), x)) {
                    ++out.cyclotomic;
                    if (!g) g = add_vertex(base, c, x);
                    auto cf = canonical_form(*g);
                    out.sigma.emplace(std::move(cf.key), std::move(cf.graph));
                } else if (probe.minimal(cx.data(), cy.data(), x)) {
                    if (!g) g = add_vertex(base, c, x);
                    auto cf = canonical_form(*g);
                    out.tau.emplace(std::move(cf.key), std::move(cf.graph));
                }
            }
            return true;
        });
    }
}

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    auto body = [&](int w) {
        for (std::size_t i = next++; i < count; i = next++) fn(w, i);
    };
    if (workers == 1) {
        body(0);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
}

}  // namespace

SearchRound grow_round(const RingSpec& ring, const std::vector<Member>& prev, int n, SearchMode mode, int jobs,
                       const mpq_class& tol) {
    const auto t0 = std::chrono::steady_clock::now();
    const RoundPlan plan = round_plan(ring, n, mode);
    const int workers = std::max(1, jobs);
    std::vector<WorkerOut> outs(static_cast<std::size_t>(workers));
    parallel_for(prev.size(), workers, [&](int w, std::size_t i) {
        if (prev[i].graph.n() != n - 1) throw std::logic_error("round input has the wrong size");
        grow_from(prev[i].graph, plan, outs[static_cast<std::size_t>(w)]);
    });
    std::map<std::string, LGraph> sigma;
    std::map<std::string, LGraph> tau;
    SearchRound r;
    r.n = n;
    for (auto& o : outs) {
        sigma.merge(o.sigma);
        tau.merge(o.tau);
        r.stats.additions += o.additions;
        r.stats.cyclotomic_additions += o.cyclotomic;
        for (const auto& [k, v] : o.pruned) r.stats.pruned[k] += v;
    }
    for (auto& [k, g] : sigma) r.sigma.push_back(Member{k, std::move(g), MahlerResult{}});
    for (auto& [k, g] : tau) r.tau.push_back(Member{k, std::move(g), MahlerResult{}});
    parallel_for(r.tau.size(), workers, [&](int, std::size_t i) {
        r.tau[i].mahler = mahler_real_rooted(char_poly(r.tau[i].graph), tol);
        r.tau[i].mahler.witnesses.clear();
    });
    finish_stats(r);
    r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ------------------------------------------------------------- persistence

std::string round_records(const SearchRound& r, std::int64_t d, SearchMode mode) {
    std::ostringstream os;
    os << "searchrecords 1\n";
    auto emit = [&](const Member& m, const char* cls) {
        nlohmann::json j;
        j["round"] = r.n;
        j["class"] = cls;
        j["key"] = key_to_hex(m.key);
        j["graph"] = nlohmann::json::parse(graph_json_line(m.graph));
        j["mahler"] = {{"lower", q_str(m.mahler.lower)}, {"upper", q_str(m.mahler.upper)}, {"decimal", m.mahler.decimal(12)}};
        os << j.dump() << "\n";
    };
    for (const auto& m : r.sigma) emit(m, "sigma");
    for (const auto& m : r.tau) emit(m, "tau");
    nlohmann::json s;
    s["round"] = r.n;
    s["d"] = d;
    s["mode"] = to_string(mode);
    s["stats"] = {{"additions", r.stats.additions},
                  {"cyclotomic_additions", r.stats.cyclotomic_additions},
                  {"pruned", r.stats.pruned},
                  {"seconds", r.stats.seconds}};
    os << s.dump() << "\n";
    return os.str();
}

SearchRound parse_round_records(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "searchrecords 1") throw ValidationError("missing 'searchrecords 1' header");
    SearchRound r;
    bool complete = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("bad record: ") + e.what());
        }
        r.n = j.at("round").get<int>();
        if (j.contains("stats")) {
            const auto& s = j["stats"];
            r.stats.additions = s.at("additions").get<std::size_t>();
            r.stats.cyclotomic_additions = s.at("cyclotomic_additions").get<std::size_t>();
            r.stats.pruned = s.at("pruned").get<std::map<std::string, std::size_t>>();
            r.stats.seconds = s.at("seconds").get<double>();
            complete = true;
            continue;
        }
        Member m;
        m.key = key_from_hex(j.at("key").get<std::string>());
        m.graph = graph_from_json_line(j.at("graph").dump());
        m.mahler.lower = q_parse(j.at("mahler").at("lower").get<std::string>());
        m.mahler.upper = q_parse(j.at("mahler").at("upper").get<std::string>());
        const auto cls = j.at("class").get<std::string>();
        if (cls == "sigma") {
            r.sigma.push_back(std::move(m));
        } else if (cls == "tau") {
            r.tau.push_back(std::move(m));
        } else {
            throw ValidationError("unknown record class '" + cls + "'");
        }
    }
    if (!complete) throw ValidationError("record stream has no closing stats line");
    finish_stats(r);
    return r;
}

std::string summary_text(const std::vector<SearchRound>& rounds, std::int64_t d, SearchMode mode) {
    std::ostringstream os;
    os << "search d=" << d << " mode=" << to_string(mode) << "\n";
    os << "n   |Sigma|   |T|   min M (certified enclosure)           additions    seconds\n";
    for (const auto& r : rounds) {
        char buf[256];
        const std::string mm = r.stats.min_mahler ? r.stats.min_mahler->decimal(9) : "-";
        std::snprintf(buf, sizeof buf, "%-3d %-9zu %-5zu %-37s %-12zu %.2f\n", r.n, r.sigma.size(), r.tau.size(), mm.c_str(),
                      r.stats.additions, r.stats.seconds);
        os << buf;
        for (const auto& [reason, count] : r.stats.pruned) os << "      pruned " << reason << ": " << count << "\n";
    }
    return os.str();
}

std::string summary_json(const std::vector<SearchRound>& rounds, std::int64_t d, SearchMode mode) {
    nlohmann::json j;
    j["format"] = "searchsummary 1";
    j["d"] = d;
    j["mode"] = to_string(mode);
    j["rounds"] = nlohmann::json::array();
    for (const auto& r : rounds) {
        nlohmann::json x;
        x["n"] = r.n;
        x["sigma"] = r.sigma.size();
        x["tau"] = r.tau.size();
        x["additions"] = r.stats.additions;
        x["cyclotomic_additions"] = r.stats.cyclotomic_additions;
        x["pruned"] = r.stats.pruned;
        x["seconds"] = r.stats.seconds;
        if (r.stats.min_mahler) {
            x["min"] = {{"lower", q_str(r.stats.min_mahler->lower)},
                        {"upper", q_str(r.stats.min_mahler->upper)},
                        {"decimal", r.stats.min_mahler->decimal(12)}};
            x["least_lower"] = q_str(least_lower(r));
        }
        if (r.stats.max_mahler) {
            x["max"] = {{"lower", q_str(r.stats.max_mahler->lower)},
                        {"upper", q_str(r.stats.max_mahler->upper)},
                        {"decimal", r.stats.max_mahler->decimal(12)}};
        }
        j["rounds"].push_back(x);
    }
    return j.dump(2) + "\n";
}

std::vector<SearchRound> run_small_search(const SearchOptions& opt) {
    const RingSpec ring = ring_make(opt.d);
    weight2_label(ring);
    if (opt.n_max < 3 || opt.n_max > 10) throw ValidationError("max-n must be in 3..10");
    if (opt.mode == SearchMode::full && opt.n_max > 6) throw ValidationError("full mode is limited to max-n <= 6");
    if (opt.tol <= 0) throw ValidationError("tolerance must be positive");
    std::vector<SearchRound> rounds;
    std::vector<Member> prev;
    for (const auto& g : seed_graphs(ring)) {
        auto cf = canonical_form(g);
        prev.push_back(Member{cf.key, cf.graph, MahlerResult{}});
    }
    std::sort(prev.begin(), prev.end(), [](const Member& a, const Member& b) { return a.key < b.key; });
    int start = 3;
    if (opt.out) {
        std::filesystem::create_directories(*opt.out);
        nlohmann::json meta{{"format", "lehmer-search 1"}, {"d", opt.d}, {"mode", to_string(opt.mode)}, {"tol", q_str(opt.tol)}};
        const auto meta_file = *opt.out / "run.json";
        if (opt.resume && std::filesystem::exists(meta_file)) {
            const auto old = nlohmann::json::parse(read_file(meta_file));
            if (old != meta) throw ValidationError("resume directory was written with different d, mode or tolerance");
            for (int n = 3; n <= opt.n_max; ++n) {
                const auto f = round_file(*opt.out, n);
                if (!std::filesystem::exists(f)) break;
                SearchRound r = parse_round_records(read_file(f));
                if (r.n != n) throw ValidationError("record file " + f.string() + " holds another round");
                prev = r.sigma;
                rounds.push_back(std::move(r));
                start = n + 1;
            }
        } else {
            for (int n = 3; n <= 10; ++n) std::filesystem::remove(round_file(*opt.out, n));
            write_atomic(meta_file, meta.dump(2) + "\n");
        }
    }
    for (int n = start; n <= opt.n_max; ++n) {
        SearchRound r = grow_round(ring, prev, n, opt.mode, opt.jobs, opt.tol);
        if (opt.out) {
            write_atomic(round_file(*opt.out, n), round_records(r, opt.d, opt.mode));
        }
        prev = r.sigma;
        rounds.push_back(std::move(r));
        if (opt.on_round) opt.on_round(rounds.back());
        if (opt.out) {
            write_atomic(*opt.out / "summary.txt", summary_text(rounds, opt.d, opt.mode));
            write_atomic(*opt.out / "summary.json", summary_json(rounds, opt.d, opt.mode));
        }
    }
    if (opt.out) {
        write_atomic(*opt.out / "summary.txt", summary_text(rounds, opt.d, opt.mode));
        write_atomic(*opt.out / "summary.json", summary_json(rounds, opt.d, opt.mode));
    }
    return rounds;
}

}  // namespace lehmer
