#include "lehmer/families.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace lehmer {

namespace {

struct FamilyInfo {
    Family f;
    const char* name;
    int min_k;  // 0 when the family has no size parameter
    std::vector<std::int64_t> only_d;  // empty: every d
};

const std::vector<FamilyInfo>& infos() {
    static const std::vector<FamilyInfo> v = {
        {Family::T2k, "T2k", 3, {}},
        {Family::C2k_pp, "C2k_pp", 2, {}},
        {Family::C2k_pm, "C2k_pm", 2, {}},
        {Family::T2k4, "T2k4", 2, {-2, -7}},
        {Family::T2k4_prime, "T2k4_prime", 2, {-7}},
        {Family::C2k_2plus, "C2k_2plus", 1, {-2, -7}},
        {Family::S7, "S7", 0, {}},
        {Family::S8, "S8", 0, {}},
        {Family::S8_prime, "S8_prime", 0, {}},
        {Family::S14, "S14", 0, {}},
        {Family::S16, "S16", 0, {}},
        {Family::S2, "S2", 0, {}},
        {Family::S2_star, "S2_star", 0, {-7, -15}},
        {Family::S2_prime, "S2_prime", 0, {-2, -11}},
        {Family::S4_prime, "S4_prime", 0, {-2, -11}},
        {Family::S4, "S4", 0, {-2, -7}},
        {Family::S4_star, "S4_star", 0, {-2}},
        {Family::S6_dagger, "S6_dagger", 0, {-7}},
        {Family::S8_star, "S8_star", 0, {-2, -7}},
        {Family::one_by_one_pm2, "ONE_BY_ONE_PM2", 0, {}},
    };
    return v;
}

const FamilyInfo& info(Family f) {
    for (const auto& i : infos()) {
        if (i.f == f) return i;
    }
    throw ValidationError("unknown family");
}

// Weight-2 label used by the L'-graph figures.
QuadInt omega2(const RingSpec& r) {
    if (r.d == -2) return QuadInt(r, 0, 1);
    if (r.d == -7) return QuadInt(r, 1, 1);
    throw ValidationError("no weight-2 family label for d = " + std::to_string(r.d));
}

// Weight-3 label of the S2' and S4' figures.
QuadInt omega3(const RingSpec& r) {
    if (r.d == -2) return QuadInt(r, 1, 1);
    if (r.d == -11) return QuadInt(r, 1, 1);
    throw ValidationError("no weight-3 family label for d = " + std::to_string(r.d));
}

// Weight-4 label of the S2* figure.
QuadInt omega4(const RingSpec& r) {
    if (r.d == -7) return QuadInt(r, 3, 1);
    if (r.d == -15) return QuadInt(r, 1, 1);
    throw ValidationError("no weight-4 family label for d = " + std::to_string(r.d));
}

// 1-based construction helper matching the figure numbering.
struct Builder {
    LGraph g;
    Builder(const RingSpec& r, int n) : g(r, n) {}
    void edge(int a, int b, const QuadInt& w) { g.set_entry(a - 1, b - 1, w); }
    void edge(int a, int b, int sign) { g.set_entry(a - 1, b - 1, QuadInt::integer(g.ring(), sign)); }
    void charge(int v, int c) { g.set_charge(v - 1, c); }
};

// Ladder on top vertices top(i) and bottom vertices bot(i), i = 1..m.
void ladder(Builder& b, int m, const std::function<int(int)>& top, const std::function<int(int)>& bot, bool wrap) {
    const int last = wrap ? m : m - 1;
    for (int i = 1; i <= last; ++i) {
        const int j = i % m + 1;
        b.edge(top(i), top(j), +1);
        b.edge(bot(i), bot(j), -1);
        b.edge(top(i), bot(j), +1);
        b.edge(bot(i), top(j), -1);
    }
}

Drawing with_columns(LGraph g, std::vector<int> column, std::vector<int> row) {
    return Drawing{std::move(g), std::move(column), std::move(row)};
}

}  // namespace

std::string family_name(Family f) { return info(f).name; }

std::optional<Family> family_from_name(const std::string& name) {
    for (const auto& i : infos()) {
        if (name == i.name) return i.f;
    }
    return std::nullopt;
}

const std::vector<Family>& all_families() {
    static const std::vector<Family> v = [] {
        std::vector<Family> out;
        for (const auto& i : infos()) out.push_back(i.f);
        return out;
    }();
    return v;
}

bool family_has_k(Family f) { return info(f).min_k > 0; }
int family_min_k(Family f) { return info(f).min_k; }

bool family_applicable(Family f, std::int64_t d) {
    const auto& only = info(f).only_d;
    return only.empty() || std::find(only.begin(), only.end(), d) != only.end();
}

Drawing generate(const FamilySpec& spec) {
    const RingSpec& r = spec.ring;
    const Family f = spec.family;
    if (!family_applicable(f, r.d)) {
        throw ValidationError(family_name(f) + " does not exist for d = " + std::to_string(r.d));
    }
    const int k = spec.k;
    if (family_has_k(f) && k < family_min_k(f)) {
        throw ValidationError(family_name(f) + " needs k >= " + std::to_string(family_min_k(f)));
    }
    switch (f) {
        case Family::T2k: {
            Builder b(r, 2 * k);
            ladder(b, k, [](int i) { return i; }, [k](int i) { return k + i; }, true);
            return Drawing{b.g, {}, {}};
        }
        case Family::C2k_pp:
        case Family::C2k_pm: {
            Builder b(r, 2 * k);
            auto top = [](int i) { return i; };
            auto bot = [k](int i) { return k + i; };
            ladder(b, k, top, bot, false);
            b.charge(top(1), 1);
            b.charge(bot(1), 1);
            b.edge(top(1), bot(1), +1);
            const int c = f == Family::C2k_pp ? 1 : -1;
            b.charge(top(k), c);
            b.charge(bot(k), c);
            b.edge(top(k), bot(k), -c);
            std::vector<int> col(static_cast<std::size_t>(2 * k));
            std::vector<int> row(static_cast<std::size_t>(2 * k));
            for (int i = 1; i <= k; ++i) {
                col[static_cast<std::size_t>(top(i) - 1)] = i - 1;
                col[static_cast<std::size_t>(bot(i) - 1)] = i - 1;
                row[static_cast<std::size_t>(bot(i) - 1)] = 1;
            }
            return with_columns(b.g, col, row);
        }
        case Family::T2k4:
        case Family::T2k4_prime: {
            // Top 1..k-1, bottom k..2k-2, left extra 2k-1, right extra 2k.
            const int m = k - 1;
            Builder b(r, 2 * k);
            auto top = [](int i) { return i; };
            auto bot = [m](int i) { return m + i; };
            const int left = 2 * k - 1;
            const int right = 2 * k;
            ladder(b, m, top, bot, false);
            const QuadInt w = omega2(r);
            const QuadInt wr = f == Family::T2k4 ? w : w.conjugate();
            b.edge(left, top(1), w);
            b.edge(left, bot(1), w);
            b.edge(top(m), right, wr);
            b.edge(bot(m), right, -wr);
            std::vector<int> col(static_cast<std::size_t>(2 * k));
            std::vector<int> row(static_cast<std::size_t>(2 * k), 0);
            for (int i = 1; i <= m; ++i) {
                col[static_cast<std::size_t>(top(i) - 1)] = i;
                col[static_cast<std::size_t>(bot(i) - 1)] = i;
                row[static_cast<std::size_t>(bot(i) - 1)] = 1;
            }
            col[static_cast<std::size_t>(left - 1)] = 0;
            col[static_cast<std::size_t>(right - 1)] = m + 1;
            return with_columns(b.g, col, row);
        }
        case Family::C2k_2plus: {
            // Top 1..k, bottom k+1..2k, extra 2k+1.
            Builder b(r, 2 * k + 1);
            auto top = [](int i) { return i; };
            auto bot = [k](int i) { return k + i; };
            const int extra = 2 * k + 1;
            ladder(b, k, top, bot, false);
            b.charge(top(1), 1);
            b.charge(bot(1), 1);
            b.edge(top(1), bot(1), +1);
            const QuadInt w = omega2(r);
            b.edge(top(k), extra, w);
            b.edge(bot(k), extra, -w);
            std::vector<int> col(static_cast<std::size_t>(2 * k + 1));
            std::vector<int> row(static_cast<std::size_t>(2 * k + 1), 0);
            for (int i = 1; i <= k; ++i) {
                col[static_cast<std::size_t>(top(i) - 1)] = i - 1;
                col[static_cast<std::size_t>(bot(i) - 1)] = i - 1;
                row[static_cast<std::size_t>(bot(i) - 1)] = 1;
            }
            col[static_cast<std::size_t>(extra - 1)] = k;
            return with_columns(b.g, col, row);
        }
        case Family::S7: {
            // 1, 2, 3, 1b, 2b, 3b, 4b -> 1..7
            Builder b(r, 7);
            b.charge(1, 1);
            b.charge(4, -1);
            b.charge(5, 1);
            b.charge(6, 1);
            b.edge(1, 3, +1);
            b.edge(1, 2, -1);
            b.edge(5, 4, +1);
            b.edge(4, 6, +1);
            b.edge(6, 7, +1);
            b.edge(5, 7, -1);
            b.edge(1, 4, +1);
            b.edge(2, 5, +1);
            b.edge(3, 6, -1);
            b.edge(2, 3, +1);
            b.edge(3, 7, +1);
            b.edge(7, 2, +1);
            return Drawing{b.g, {}, {}};
        }
        case Family::S8: {
            // 1..4, 1b..4b -> 1..8
            Builder b(r, 8);
            const int ch[8] = {-1, 1, 1, -1, 1, -1, -1, 1};
            for (int v = 1; v <= 8; ++v) b.charge(v, ch[v - 1]);
            b.edge(1, 3, +1);
            b.edge(3, 4, +1);
            b.edge(4, 2, +1);
            b.edge(1, 2, -1);
            b.edge(6, 5, +1);
            b.edge(5, 7, +1);
            b.edge(7, 8, +1);
            b.edge(6, 8, -1);
            b.edge(1, 5, +1);
            b.edge(2, 6, +1);
            b.edge(4, 8, +1);
            b.edge(3, 7, -1);
            return Drawing{b.g, {}, {}};
        }
        case Family::S8_prime: {
            Builder b(r, 8);
            const int ch[8] = {-1, 0, 1, 0, 0, 1, 0, -1};
            for (int v = 1; v <= 8; ++v) b.charge(v, ch[v - 1]);
            b.edge(2, 1, +1);
            b.edge(1, 3, +1);
            b.edge(3, 4, +1);
            b.edge(4, 2, -1);
            b.edge(6, 8, +1);
            b.edge(8, 7, +1);
            b.edge(7, 5, +1);
            b.edge(5, 6, -1);
            b.edge(1, 5, +1);
            b.edge(2, 6, +1);
            b.edge(4, 8, +1);
            b.edge(2, 5, +1);
            b.edge(4, 7, +1);
            b.edge(3, 7, -1);
            return Drawing{b.g, {}, {}};
        }
        case Family::S14: {
            // Inner i -> i, outer ia -> 7 + i.
            Builder b(r, 14);
            auto out = [](int i) { return 7 + ((i - 1) % 7 + 7) % 7 + 1; };
            for (int i = 1; i <= 7; ++i) {
                b.edge(i, out(i), +1);
                b.edge(out(i), i % 7 + 1, +1);
                b.edge(i, out(i + 4), +1);
                b.edge(i, out(i + 1), -1);
            }
            return Drawing{b.g, {}, {}};
        }
        case Family::S16: {
            // i -> i, ib -> 8 + i.
            Builder b(r, 16);
            auto B = [](int i) { return 8 + i; };
            const int pos[][2] = {{3, 1}, {1, 2}, {2, 4}, {B(1), B(2)}, {B(2), B(4)}, {B(4), B(3)},
                                  {1, B(1)}, {3, B(3)}, {4, B(4)}, {6, 5}, {5, 7}, {7, 8},
                                  {B(5), B(7)}, {B(7), B(8)}, {B(8), B(6)}, {5, B(5)}, {6, B(6)}, {8, B(8)},
                                  {2, 6}, {3, 7}, {4, 8}, {B(1), B(5)}, {B(2), B(6)}, {B(3), B(7)}};
            const int neg[][2] = {{3, 4}, {B(1), B(3)}, {2, B(2)}, {6, 8}, {B(5), B(6)}, {7, B(7)}, {1, 5}, {B(4), B(8)}};
            for (const auto& e : pos) b.edge(e[0], e[1], +1);
            for (const auto& e : neg) b.edge(e[0], e[1], -1);
            return Drawing{b.g, {}, {}};
        }
        case Family::S2: {
            Builder b(r, 2);
            b.edge(1, 2, QuadInt::integer(r, 2));
            return Drawing{b.g, {}, {}};
        }
        case Family::S2_star: {
            Builder b(r, 2);
            b.edge(1, 2, omega4(r));
            return Drawing{b.g, {}, {}};
        }
        case Family::S2_prime: {
            Builder b(r, 2);
            b.charge(1, 1);
            b.charge(2, -1);
            b.edge(1, 2, omega3(r));
            return Drawing{b.g, {}, {}};
        }
        case Family::S4_prime: {
            Builder b(r, 4);
            const QuadInt w = omega3(r);
            b.edge(1, 2, w);
            b.edge(3, 4, -w);
            b.edge(1, 3, +1);
            b.edge(2, 4, +1);
            return Drawing{b.g, {}, {}};
        }
        case Family::S4:
        case Family::S4_star: {
            Builder b(r, 4);
            const QuadInt w = omega2(r);
            b.edge(1, 2, w);
            b.edge(3, 4, -w);
            b.edge(1, 3, +1);
            b.edge(2, 4, +1);
            if (f == Family::S4) {
                b.charge(1, 1);
                b.charge(2, -1);
                b.charge(3, -1);
                b.charge(4, 1);
            } else {
                b.edge(1, 4, +1);
                b.edge(2, 3, -1);
            }
            return Drawing{b.g, {}, {}};
        }
        case Family::S6_dagger: {
            Builder b(r, 6);
            const QuadInt w = omega2(r);
            b.edge(1, 2, +1);
            b.edge(4, 3, +1);
            b.edge(6, 5, +1);
            b.edge(3, 6, +1);
            b.edge(5, 2, -1);
            b.edge(1, 4, -1);
            b.edge(1, 6, w);
            b.edge(5, 4, -w);
            b.edge(3, 2, w);
            return Drawing{b.g, {}, {}};
        }
        case Family::S8_star: {
            Builder b(r, 8);
            const QuadInt w = omega2(r);
            b.edge(8, 7, -1);
            b.edge(5, 6, -1);
            b.edge(8, 4, +1);
            b.edge(7, 3, +1);
            b.edge(5, 1, +1);
            b.edge(6, 2, +1);
            b.edge(4, 3, +1);
            b.edge(1, 2, +1);
            b.edge(8, 5, -w);
            b.edge(7, 6, w);
            b.edge(3, 2, -w);
            b.edge(4, 1, w);
            return Drawing{b.g, {}, {}};
        }
        case Family::one_by_one_pm2: {
            Builder b(r, 1);
            b.charge(1, 2);
            return Drawing{b.g, {}, {}};
        }
    }
    throw ValidationError("unknown family");
}

Drawing induced_drawing(const Drawing& d, const std::vector<int>& vertices) {
    Drawing out;
    out.graph = induced_subgraph(d.graph, vertices);
    if (d.has_layout()) {
        for (int v : vertices) {
            out.column.push_back(d.column[static_cast<std::size_t>(v)]);
            out.row.push_back(d.row[static_cast<std::size_t>(v)]);
        }
    }
    return out;
}

// ------------------------------------------------------------- maximality

bool verify_maximal(const LGraph& g) {
    if (!is_connected(g)) throw ValidationError("verify_maximal needs a connected graph");
    if (!is_cyclotomic(g)) throw ValidationError("verify_maximal needs a cyclotomic graph");
    const int n = g.n();
    const auto labels = label_set(g.ring(), LabelTag::full_l).members;
    std::vector<QuadInt> nonzero;
    for (const auto& q : labels) {
        if (!q.is_zero()) nonzero.push_back(q);
    }
    std::vector<std::int64_t> cap(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cap[static_cast<std::size_t>(i)] = 4 - weighted_degree(g, i);
    const ExtensionCharPoly ext(g);
    std::vector<std::int64_t> cx(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> cy(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> coeffs;
    bool found = false;
    for (std::int64_t x : {0, 1, -1}) {
        const std::int64_t budget = 4 - x * x;
        std::function<void(int, std::int64_t, bool)> dfs = [&](int i, std::int64_t used, bool any) {
            if (found) return;
            if (i == n) {
                if (!any) return;
                if (!ext.compute(cx.data(), cy.data(), x, coeffs)) {
                    std::vector<QuadInt> col;
                    for (int j = 0; j < n; ++j) col.emplace_back(g.ring(), cx[static_cast<std::size_t>(j)], cy[static_cast<std::size_t>(j)]);
                    found = is_cyclotomic(add_vertex(g, col, x));
                } else {
                    found = spectrum_within_two(coeffs.data(), n + 1);
                }
                return;
            }
            cx[static_cast<std::size_t>(i)] = 0;
            cy[static_cast<std::size_t>(i)] = 0;
            dfs(i + 1, used, any);
            for (const auto& q : nonzero) {
                if (found) return;
                const std::int64_t nm = q.norm();
                if (nm > cap[static_cast<std::size_t>(i)] || used + nm > budget) continue;
                // One of each pair {c, -c}: the first nonzero entry is the larger of q, -q.
                if (!any && q < -q) continue;
                cx[static_cast<std::size_t>(i)] = q.x();
                cy[static_cast<std::size_t>(i)] = q.y();
                dfs(i + 1, used + nm, true);
            }
            cx[static_cast<std::size_t>(i)] = 0;
            cy[static_cast<std::size_t>(i)] = 0;
        };
        dfs(0, 0, false);
        if (found) return false;
    }
    return true;
}

// --------------------------------------------------------------- embedding

namespace {

constexpr const char* kCacheStamp = "lehmer-embedding-keys 1";

void for_each_subset(int n, int m, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> s(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) s[static_cast<std::size_t>(i)] = i;
    if (m > n) return;
    while (true) {
        fn(s);
        int i = m - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) return;
        ++s[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j) - 1] + 1;
    }
}

double binomial(int n, int m) {
    double r = 1;
    for (int i = 1; i <= m; ++i) r = r * (n - m + i) / i;
    return r;
}

void write_u32(std::ostream& os, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8), static_cast<char>(v)};
    os.write(b, 4);
}

bool read_u32(std::istream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
    return true;
}

}  // namespace

const std::map<std::string, std::vector<int>>& EmbeddingOracle::keys_for(Family fam, const RingSpec& ring, int k, int m) {
    const Slot slot{static_cast<int>(fam), ring.d, k, m};
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (auto it = memo_.find(slot); it != memo_.end()) return it->second;
    }
    std::map<std::string, std::vector<int>> keys;
    std::filesystem::path file;
    bool loaded = false;
    if (cache_dir_) {
        file = *cache_dir_ / (family_name(fam) + "_d" + std::to_string(-ring.d) + "_k" + std::to_string(k) + "_m" +
                              std::to_string(m) + ".keys");
        std::ifstream in(file, std::ios::binary);
        std::string stamp;
        if (in && std::getline(in, stamp) && stamp == kCacheStamp) {
            std::uint32_t count = 0;
            loaded = read_u32(in, count);
            for (std::uint32_t i = 0; loaded && i < count; ++i) {
                std::uint32_t klen = 0;
                std::uint32_t vlen = 0;
                loaded = read_u32(in, klen);
                std::string key(klen, '\0');
                loaded = loaded && static_cast<bool>(in.read(key.data(), klen)) && read_u32(in, vlen);
                std::vector<int> vs;
                for (std::uint32_t j = 0; loaded && j < vlen; ++j) {
                    std::uint32_t v = 0;
                    loaded = read_u32(in, v);
                    vs.push_back(static_cast<int>(v));
                }
                if (loaded) keys.emplace(std::move(key), std::move(vs));
            }
            if (!loaded) keys.clear();
        }
    }
    if (!loaded) {
        const LGraph host = generate(FamilySpec{fam, k, ring}).graph;
        if (binomial(host.n(), m) > 5e6) {
            throw ValidationError("embedding key set for " + family_name(fam) + " k=" + std::to_string(k) + " too large");
        }
        for_each_subset(host.n(), m, [&](const std::vector<int>& s) {
            keys.emplace(canonical_key(induced_subgraph(host, s)), s);
        });
        if (cache_dir_) {
            std::filesystem::create_directories(*cache_dir_);
            const auto tmp = file.string() + ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                out << kCacheStamp << "\n";
                write_u32(out, static_cast<std::uint32_t>(keys.size()));
                for (const auto& [key, vs] : keys) {
                    write_u32(out, static_cast<std::uint32_t>(key.size()));
                    out.write(key.data(), static_cast<std::streamsize>(key.size()));
                    write_u32(out, static_cast<std::uint32_t>(vs.size()));
                    for (int v : vs) write_u32(out, static_cast<std::uint32_t>(v));
                }
            }
            std::filesystem::rename(tmp, file);
        }
    }
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.emplace(slot, std::move(keys)).first->second;
}

std::optional<Embedding> EmbeddingOracle::find(const LGraph& g, Family fam, int k_max) {
    if (!family_applicable(fam, g.ring().d)) return std::nullopt;
    const std::string key = canonical_key(g);
    const int lo = family_has_k(fam) ? family_min_k(fam) : 0;
    const int hi = family_has_k(fam) ? k_max : 0;
    if (family_has_k(fam) && k_max < lo) throw ValidationError("k_max below the family minimum");
    for (int k = lo; k <= hi; ++k) {
        const int size = generate(FamilySpec{fam, k, g.ring()}).graph.n();
        if (size < g.n()) continue;
        const auto& keys = keys_for(fam, g.ring(), k, g.n());
        if (auto it = keys.find(key); it != keys.end()) return Embedding{k, it->second};
    }
    return std::nullopt;
}

std::optional<Embedding> embeds_in_family(const LGraph& g, Family fam, int k_max) {
    static EmbeddingOracle oracle;
    return oracle.find(g, fam, k_max);
}

// ------------------------------------------------------------------ parity

std::string to_string(CycleKind k) {
    switch (k) {
        case CycleKind::hourglass: return "hourglass";
        case CycleKind::parallelogram: return "parallelogram";
        case CycleKind::triangular: return "triangular";
        case CycleKind::other: return "other";
    }
    return "?";
}

int edge_polarity(const LGraph& g, int u, int v) {
    if (!g.adjacent(u, v)) return 0;
    const std::int64_t x = g.ex(u, v);
    const std::int64_t y = g.ey(u, v);
    if (g.ring().d == -2) {
        // Positive: 1 and sqrt(-2).
        return (x > 0 || (x == 0 && y > 0)) ? 1 : -1;
    }
    // d = -7, positive: 1, omega and its conjugate.
    return x > 0 ? 1 : -1;
}

ParityReport parity_conditions(const Drawing& dr) {
    const LGraph& g = dr.graph;
    if (g.ring().d != -2 && g.ring().d != -7) throw ValidationError("parity conditions are defined for d = -2, -7");
    if (!dr.has_layout()) throw ValidationError("drawing has no column layout");
    const int n = g.n();
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (g.adjacent(u, v) && std::abs(dr.column[static_cast<std::size_t>(u)] - dr.column[static_cast<std::size_t>(v)]) > 1) {
                throw ValidationError("drawing violates the column property");
            }
        }
    }
    // Labels are read left to right, then top to bottom within a column.
    auto polarity = [&](int u, int v) {
        const auto pu = std::pair(dr.column[static_cast<std::size_t>(u)], dr.row[static_cast<std::size_t>(u)]);
        const auto pv = std::pair(dr.column[static_cast<std::size_t>(v)], dr.row[static_cast<std::size_t>(v)]);
        return pu <= pv ? edge_polarity(g, u, v) : edge_polarity(g, v, u);
    };
    ParityReport rep;
    for_each_subset(n, 4, [&](const std::vector<int>& s) {
        int edges = 0;
        for (int a = 0; a < 4; ++a) {
            int deg = 0;
            for (int b = 0; b < 4; ++b) deg += g.adjacent(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]) ? 1 : 0;
            if (deg != 2) return;
            edges += deg;
        }
        if (edges != 8) return;
        std::vector<int> cyc{s[0]};
        int prev = -1;
        while (static_cast<int>(cyc.size()) < 4) {
            const int cur = cyc.back();
            for (int v : s) {
                if (v != cur && v != prev && g.adjacent(cur, v) && std::find(cyc.begin(), cyc.end(), v) == cyc.end()) {
                    prev = cur;
                    cyc.push_back(v);
                    break;
                }
            }
        }
        CycleCheck cc;
        cc.cycle = cyc;
        for (int i = 0; i < 4; ++i) {
            if (polarity(cyc[static_cast<std::size_t>(i)], cyc[static_cast<std::size_t>((i + 1) % 4)]) > 0) ++cc.positive;
        }
        std::vector<std::pair<int, int>> cols;
        for (int v : s) cols.emplace_back(dr.column[static_cast<std::size_t>(v)], v);
        std::sort(cols.begin(), cols.end());
        const int c0 = cols[0].first;
        if (cols[1].first == c0 && cols[2].first == c0 + 1 && cols[3].first == c0 + 1) {
            cc.kind = CycleKind::hourglass;
            cc.pass = cc.positive % 2 == 0;
        } else if (cols[1].first == c0 + 1 && cols[2].first == c0 + 1 && cols[3].first == c0 + 2) {
            const bool same_row = dr.row[static_cast<std::size_t>(cols[0].second)] == dr.row[static_cast<std::size_t>(cols[3].second)];
            cc.kind = same_row ? CycleKind::triangular : CycleKind::parallelogram;
            cc.pass = cc.positive % 2 == 1;
        }
        rep.pass = rep.pass && cc.pass;
        rep.cycles.push_back(std::move(cc));
    });
    for_each_subset(n, 3, [&](const std::vector<int>& s) {
        const int a = s[0], b = s[1], c = s[2];
        if (!g.adjacent(a, b) || !g.adjacent(b, c) || !g.adjacent(a, c)) return;
        int plus = 0;
        int minus = 0;
        for (int v : s) {
            if (g.charge(v) > 0) ++plus;
            if (g.charge(v) < 0) ++minus;
        }
        if (plus + minus < 2 || (plus > 0 && minus > 0)) return;
        TriangleCheck tc;
        tc.triangle = s;
        tc.charge_sign = plus > 0 ? 1 : -1;
        const int pol[3] = {polarity(a, b), polarity(b, c), polarity(c, a)};
        for (int p : pol) {
            if (p == tc.charge_sign) ++tc.counted;
        }
        tc.pass = tc.counted % 2 == 0;
        rep.pass = rep.pass && tc.pass;
        rep.triangles.push_back(std::move(tc));
    });
    return rep;
}

}  // namespace lehmer
