#include "lehmer/search.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

namespace lehmer {

namespace {

bool has_weight2(const LGraph& g, int v) {
    for (int u = 0; u < g.n(); ++u) {
        if (u != v && g.adjacent(u, v) && g.norm(u, v) == 2) return true;
    }
    return false;
}

struct ClassOut {
    std::size_t additions = 0;
    std::size_t noncyclotomic = 0;
    std::size_t pruned_x4b = 0;
    std::size_t unpruned_disconnected = 0;
    std::map<std::string, LGraph> finds;
};

// Uncharged additions with the column set of the class kind.
void grow_class(const LGraph& h, const RingSpec& r, ClassOut& out) {
    const int k = h.n();
    const auto comps = components(h);
    const bool connected = comps.size() == 1;
    bool singleton = false;
    for (const auto& c : comps) singleton |= c.size() == 1;
    std::vector<int> comp_of(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < comps.size(); ++i) {
        for (int v : comps[i]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
    const AdditionProbe probe(h);
    const auto pool = label_set(r, connected ? LabelTag::l2_zero : LabelTag::l_prime).members;
    std::vector<std::int64_t> cx(static_cast<std::size_t>(k));
    std::vector<std::int64_t> cy(static_cast<std::size_t>(k));
    const FormPattern x4b = pattern_x4b();
    ColumnSpec spec{k, pool, true, 4, {}};
    enumerate_columns(spec, [&](const std::vector<QuadInt>& c) {
        bool w2 = false;
        std::vector<bool> touched(comps.size(), false);
        for (int i = 0; i < k; ++i) {
            const auto& q = c[static_cast<std::size_t>(i)];
            cx[static_cast<std::size_t>(i)] = q.x();
            cy[static_cast<std::size_t>(i)] = q.y();
            w2 |= q.norm() == 2;
            if (!q.is_zero()) touched[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(i)])] = true;
        }
        // The weight-2 edge of the find must be incident at the new vertex.
        if (!w2) return true;
        // A minimal noncyclotomic graph is connected.
        if (std::find(touched.begin(), touched.end(), false) != touched.end()) return true;
        ++out.additions;
        if (!connected && !singleton) {
            const LGraph g = add_vertex(h, c, 0);
            if (contains_form(g, x4b, k)) {
                ++out.pruned_x4b;
                return true;
            }
            ++out.unpruned_disconnected;
        }
        if (probe.cyclotomic(cx.data(), cy.data(), 0)) return true;
        ++out.noncyclotomic;
        if (probe.minimal(cx.data(), cy.data(), 0)) {
            LGraph g = add_vertex(h, c, 0);
            if (has_weight2(g, k)) {
                auto cf = canonical_form(g);
                out.finds.emplace(std::move(cf.key), std::move(cf.graph));
            }
        }
        return true;
    });
}

}  // namespace

SupersporadicResult run_supersporadic(std::int64_t d, Family base, int k, int jobs) {
    if (d != -2 && d != -7) throw ValidationError("supersporadic search is defined for d = -2, -7");
    if (base != Family::S14 && base != Family::S16) throw ValidationError("base must be S14 or S16");
    const auto t0 = std::chrono::steady_clock::now();
    const RingSpec r = ring_make(d);
    const LGraph g = generate(FamilySpec{base, 0, r}).graph;
    const int n = g.n();
    if (k < 10 || k > n) throw ValidationError("k must lie in [10, " + std::to_string(n) + "]");

    SupersporadicResult res;
    res.d = d;
    res.base = base;
    res.k = k;
    // Classes of k-vertex induced subgraphs.
    std::map<std::string, LGraph> classes;
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<int> vs;
        for (int i = 0; i < n; ++i) {
            if (pick[static_cast<std::size_t>(i)]) vs.push_back(i);
        }
        ++res.subsets;
        auto cf = canonical_form(induced_subgraph(g, vs));
        classes.emplace(std::move(cf.key), std::move(cf.graph));
    } while (std::prev_permutation(pick.begin(), pick.end()));

    std::vector<const LGraph*> reps;
    for (const auto& [key, h] : classes) {
        reps.push_back(&h);
        const auto comps = components(h);
        if (comps.size() == 1) {
            ++res.connected_classes;
        } else if (std::any_of(comps.begin(), comps.end(), [](const auto& c) { return c.size() == 1; })) {
            ++res.disconnected_singleton;
        } else {
            ++res.disconnected_pruned;
        }
    }
    std::vector<ClassOut> outs(reps.size());
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i = next++; i < reps.size(); i = next++) grow_class(*reps[i], r, outs[i]);
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(reps.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();

    std::map<std::string, LGraph> finds;
    for (auto& o : outs) {
        res.additions += o.additions;
        res.noncyclotomic += o.noncyclotomic;
        res.pruned_x4b += o.pruned_x4b;
        res.unpruned_disconnected += o.unpruned_disconnected;
        finds.merge(o.finds);
    }
    for (auto& [key, f] : finds) res.finds.push_back(std::move(f));
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string supersporadic_json(const std::vector<SupersporadicResult>& results) {
    nlohmann::json j;
    j["format"] = "supersporadic 1";
    j["runs"] = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json x;
        x["d"] = r.d;
        x["base"] = family_name(r.base);
        x["k"] = r.k;
        x["subsets"] = r.subsets;
        x["connected_classes"] = r.connected_classes;
        x["disconnected_singleton"] = r.disconnected_singleton;
        x["disconnected_other"] = r.disconnected_pruned;
        x["additions"] = r.additions;
        x["noncyclotomic"] = r.noncyclotomic;
        x["pruned_x4b"] = r.pruned_x4b;
        x["unpruned_disconnected"] = r.unpruned_disconnected;
        x["finds"] = nlohmann::json::array();
        for (const auto& f : r.finds) x["finds"].push_back(nlohmann::json::parse(graph_json_line(f)));
        x["seconds"] = r.seconds;
        j["runs"].push_back(x);
    }
    return j.dump(2) + "\n";
}

}  // namespace lehmer
