#include "lehmer/lgraph.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <sstream>

namespace lehmer {

// ------------------------------------------------------------------ LGraph

LGraph::LGraph(RingSpec ring, int n)
    : ring_(ring),
      n_(n),
      charge_(static_cast<std::size_t>(n), 0),
      ex_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0),
      ey_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {
    if (n < 0) throw ValidationError("negative vertex count");
}

void LGraph::set_charge(int v, std::int64_t c) {
    if (v < 0 || v >= n_) throw ValidationError("vertex index out of range");
    charge_[static_cast<std::size_t>(v)] = c;
}

QuadInt LGraph::entry(int i, int j) const {
    if (i == j) return QuadInt::integer(ring_, charge(i));
    return QuadInt(ring_, ex_[idx(i, j)], ey_[idx(i, j)]);
}

void LGraph::set_entry(int i, int j, const QuadInt& q) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ValidationError("vertex index out of range");
    if (i == j) throw ValidationError("set_entry is for off-diagonal entries");
    if (!(q.ring() == ring_)) throw ValidationError("label from a different ring");
    ex_[idx(i, j)] = q.x();
    ey_[idx(i, j)] = q.y();
    ex_[idx(j, i)] = q.x();
    ey_[idx(j, i)] = -q.y();
}

std::int64_t LGraph::norm(int i, int j) const {
    const std::int64_t x = ex_[idx(i, j)];
    const std::int64_t y = ey_[idx(i, j)];
    return (x * x - ring_.d * y * y) / (ring_.s * ring_.s);
}

LGraph graph_make(RingSpec ring, int n, const std::vector<QuadInt>& diagonal,
                  const std::vector<std::optional<QuadInt>>& upper) {
    std::vector<std::int64_t> charges;
    for (const auto& q : diagonal) {
        if (!(q.ring() == ring)) throw ValidationError("diagonal entry from a different ring");
        if (!q.is_rational() || q.x() % ring.s != 0) {
            throw ValidationError("diagonal entry " + q.to_string() + " is not a rational integer");
        }
        charges.push_back(q.rational_value());
    }
    return graph_make(ring, n, charges, upper);
}

LGraph graph_make(RingSpec ring, int n, const std::vector<std::int64_t>& charges,
                  const std::vector<std::optional<QuadInt>>& upper) {
    if (n < 1) throw ValidationError("graph needs at least one vertex");
    if (static_cast<int>(charges.size()) != n) throw ValidationError("charge list length differs from n");
    const std::size_t pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    if (upper.size() != pairs) throw ValidationError("upper triangle needs n(n-1)/2 entries");
    LGraph g(ring, n);
    for (int i = 0; i < n; ++i) g.set_charge(i, charges[static_cast<std::size_t>(i)]);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
            if (upper[k] && !upper[k]->is_zero()) g.set_entry(i, j, *upper[k]);
        }
    }
    return g;
}

// ------------------------------------------------------ characteristic poly

namespace {

struct I64Ops {
    using T = std::int64_t;
    bool overflow = false;
    T add(T a, T b) {
        T r;
        overflow |= __builtin_add_overflow(a, b, &r);
        return r;
    }
    T sub(T a, T b) {
        T r;
        overflow |= __builtin_sub_overflow(a, b, &r);
        return r;
    }
    T mul(T a, T b) {
        T r;
        overflow |= __builtin_mul_overflow(a, b, &r);
        return r;
    }
};

struct MpzOps {
    using T = mpz_class;
    static constexpr bool overflow = false;
    T add(const T& a, const T& b) { return a + b; }
    T sub(const T& a, const T& b) { return a - b; }
    T mul(const T& a, const T& b) { return a * b; }
};

// Elements a + b sqrt(d) of Z[sqrt d].
template <class T>
struct Pair {
    T a{};
    T b{};
};

template <class Ops>
struct PairArith {
    using T = typename Ops::T;
    Ops& ops;
    T d;
    Pair<T> add(const Pair<T>& x, const Pair<T>& y) { return {ops.add(x.a, y.a), ops.add(x.b, y.b)}; }
    Pair<T> mul(const Pair<T>& x, const Pair<T>& y) {
        return {ops.add(ops.mul(x.a, y.a), ops.mul(d, ops.mul(x.b, y.b))),
                ops.add(ops.mul(x.a, y.b), ops.mul(x.b, y.a))};
    }
    Pair<T> neg(const Pair<T>& x) { return {ops.sub(T(0), x.a), ops.sub(T(0), x.b)}; }
};

// One Berkowitz step: old is the descending coefficient vector of the leading
// r x r block; returns the vector of the (r+1) x (r+1) block.
template <class Ops>
std::vector<Pair<typename Ops::T>> berkowitz_step(PairArith<Ops>& ar, const std::vector<Pair<typename Ops::T>>& old,
                                                  const std::function<Pair<typename Ops::T>(int, int)>& block, int r,
                                                  const std::vector<Pair<typename Ops::T>>& col,
                                                  const std::vector<Pair<typename Ops::T>>& row,
                                                  const Pair<typename Ops::T>& diag) {
    using P = Pair<typename Ops::T>;
    std::vector<P> q(static_cast<std::size_t>(r) + 2);
    q[0] = P{typename Ops::T(1), typename Ops::T(0)};
    q[1] = ar.neg(diag);
    std::vector<P> v = col;
    std::vector<P> w(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) {
        P dot{};
        for (int i = 0; i < r; ++i) dot = ar.add(dot, ar.mul(row[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)]));
        q[static_cast<std::size_t>(k) + 2] = ar.neg(dot);
        if (k + 1 == r) break;
        for (int i = 0; i < r; ++i) {
            P acc{};
            for (int j = 0; j < r; ++j) acc = ar.add(acc, ar.mul(block(i, j), v[static_cast<std::size_t>(j)]));
            w[static_cast<std::size_t>(i)] = acc;
        }
        std::swap(v, w);
    }
    std::vector<P> out(static_cast<std::size_t>(r) + 2);
    for (int i = 0; i <= r + 1; ++i) {
        P acc{};
        for (int j = std::max(0, i - r - 1); j <= std::min(i, r); ++j) {
            acc = ar.add(acc, ar.mul(q[static_cast<std::size_t>(i - j)], old[static_cast<std::size_t>(j)]));
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

template <class Ops>
std::vector<Pair<typename Ops::T>> berkowitz(Ops& ops, const LGraph& g) {
    using T = typename Ops::T;
    using P = Pair<T>;
    PairArith<Ops> ar{ops, T(g.ring().d)};
    const int n = g.n();
    const T s(g.ring().s);
    auto entry = [&](int i, int j) -> P {
        if (i == j) return P{ops.mul(s, T(g.charge(i))), T(0)};
        return P{T(g.ex(i, j)), T(g.ey(i, j))};
    };
    std::vector<P> vec{P{T(1), T(0)}};
    if (n == 0) return vec;
    vec.push_back(ar.neg(entry(0, 0)));
    for (int r = 1; r < n; ++r) {
        std::vector<P> col(static_cast<std::size_t>(r));
        std::vector<P> row(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) {
            col[static_cast<std::size_t>(i)] = entry(i, r);
            row[static_cast<std::size_t>(i)] = entry(r, i);
        }
        vec = berkowitz_step<Ops>(ar, vec, entry, r, col, row, entry(r, r));
        if (ops.overflow) return {};
    }
    return vec;
}

[[noreturn]] void charpoly_bug(const std::string& what) {
    throw std::logic_error("characteristic polynomial: " + what);
}

}  // namespace

bool char_poly_i64(const LGraph& g, std::vector<std::int64_t>& out) {
    I64Ops ops;
    auto vec = berkowitz(ops, g);
    if (ops.overflow) return false;
    const int n = g.n();
    const std::int64_t s = g.ring().s;
    out.assign(static_cast<std::size_t>(n) + 1, 0);
    std::int64_t scale = 1;
    for (int k = n; k >= 0; --k) {
        const auto& p = vec[static_cast<std::size_t>(n - k)];
        if (p.b != 0) charpoly_bug("non-real coefficient");
        if (p.a % scale != 0) charpoly_bug("non-integral coefficient");
        out[static_cast<std::size_t>(k)] = p.a / scale;
        if (k > 0 && __builtin_mul_overflow(scale, s, &scale)) return false;
    }
    return true;
}

IntPoly char_poly(const LGraph& g) {
    std::vector<std::int64_t> small;
    if (char_poly_i64(g, small)) {
        std::vector<mpz_class> c;
        for (auto v : small) c.emplace_back(static_cast<long>(v));
        return IntPoly(std::move(c));
    }
    MpzOps ops;
    auto vec = berkowitz(ops, g);
    const int n = g.n();
    std::vector<mpz_class> c(static_cast<std::size_t>(n) + 1);
    mpz_class scale = 1;
    for (int k = n; k >= 0; --k) {
        const auto& p = vec[static_cast<std::size_t>(n - k)];
        if (p.b != 0) charpoly_bug("non-real coefficient");
        if (!mpz_divisible_p(p.a.get_mpz_t(), scale.get_mpz_t())) charpoly_bug("non-integral coefficient");
        mpz_divexact(c[static_cast<std::size_t>(k)].get_mpz_t(), p.a.get_mpz_t(), scale.get_mpz_t());
        scale *= g.ring().s;
    }
    return IntPoly(std::move(c));
}

ExtensionCharPoly::ExtensionCharPoly(const LGraph& base) : n_(base.n()), d_(base.ring().d), s_(base.ring().s) {
    const std::size_t nn = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    ax_.resize(nn);
    ay_.resize(nn);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const std::size_t k = static_cast<std::size_t>(i * n_ + j);
            if (i == j) {
                ax_[k] = s_ * base.charge(i);
                ay_[k] = 0;
            } else {
                ax_[k] = base.ex(i, j);
                ay_[k] = base.ey(i, j);
            }
        }
    }
    I64Ops ops;
    auto vec = berkowitz(ops, base);
    if (ops.overflow) {
        ok_ = false;
        return;
    }
    for (const auto& p : vec) {
        bx_.push_back(p.a);
        by_.push_back(p.b);
    }
}

bool ExtensionCharPoly::compute(const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge,
                                std::vector<std::int64_t>& out) const {
    if (!ok_) return false;
    const int n = n_;
    bool ovf = false;
    auto mul = [&](std::int64_t a, std::int64_t b) {
        std::int64_t r;
        ovf |= __builtin_mul_overflow(a, b, &r);
        return r;
    };
    auto add = [&](std::int64_t a, std::int64_t b) {
        std::int64_t r;
        ovf |= __builtin_add_overflow(a, b, &r);
        return r;
    };
    // q = [1, -s x, -R C, -R A C, ..., -R A^{n-1} C] with R the conjugate of C.
    std::int64_t qx[72];
    std::int64_t qy[72];
    std::int64_t vx[64], vy[64], wx[64], wy[64];
    if (n + 2 > 72) return false;
    qx[0] = 1;
    qy[0] = 0;
    qx[1] = -s_ * charge;
    qy[1] = 0;
    for (int i = 0; i < n; ++i) {
        vx[i] = cx[i];
        vy[i] = cy[i];
    }
    for (int k = 0; k < n; ++k) {
        std::int64_t dx = 0;
        std::int64_t dy = 0;
        for (int i = 0; i < n; ++i) {
            // conj(c_i) * v_i = (cx - cy r)(vx + vy r)
            dx = add(dx, add(mul(cx[i], vx[i]), mul(-d_, mul(cy[i], vy[i]))));
            dy = add(dy, add(mul(cx[i], vy[i]), -mul(cy[i], vx[i])));
        }
        qx[k + 2] = -dx;
        qy[k + 2] = -dy;
        if (k + 1 == n) break;
        for (int i = 0; i < n; ++i) {
            std::int64_t sx = 0;
            std::int64_t sy = 0;
            const std::int64_t* rx = &ax_[static_cast<std::size_t>(i * n)];
            const std::int64_t* ry = &ay_[static_cast<std::size_t>(i * n)];
            for (int j = 0; j < n; ++j) {
                if (rx[j] == 0 && ry[j] == 0) continue;
                sx = add(sx, add(mul(rx[j], vx[j]), mul(d_, mul(ry[j], vy[j]))));
                sy = add(sy, add(mul(rx[j], vy[j]), mul(ry[j], vx[j])));
            }
            wx[i] = sx;
            wy[i] = sy;
        }
        std::copy(wx, wx + n, vx);
        std::copy(wy, wy + n, vy);
    }
    if (ovf) return false;
    const int m = n + 1;
    out.assign(static_cast<std::size_t>(m) + 1, 0);
    std::int64_t scale = 1;
    for (int i = m; i >= 0; --i) {
        // Descending index i holds x^(m - i).
        std::int64_t ax = 0;
        std::int64_t ay = 0;
        for (int j = std::max(0, i - n - 1); j <= std::min(i, n); ++j) {
            const std::int64_t px = qx[i - j];
            const std::int64_t py = qy[i - j];
            ax = add(ax, add(mul(px, bx_[static_cast<std::size_t>(j)]), mul(d_, mul(py, by_[static_cast<std::size_t>(j)]))));
            ay = add(ay, add(mul(px, by_[static_cast<std::size_t>(j)]), mul(py, bx_[static_cast<std::size_t>(j)])));
        }
        if (ovf) return false;
        const int k = m - i;
        (void)k;
        if (ay != 0) charpoly_bug("non-real coefficient in extension");
        out[static_cast<std::size_t>(m - i)] = ax;
    }
    // Divide x^k coefficient by s^(m - k).
    for (int k = m; k >= 0; --k) {
        auto& c = out[static_cast<std::size_t>(k)];
        if (c % scale != 0) charpoly_bug("non-integral coefficient in extension");
        c /= scale;
        if (k > 0 && __builtin_mul_overflow(scale, s_, &scale)) return false;
    }
    return true;
}

std::int64_t weighted_degree(const LGraph& g, int v) {
    std::int64_t w = g.charge(v) * g.charge(v);
    for (int u = 0; u < g.n(); ++u) {
        if (u != v) w += g.norm(v, u);
    }
    return w;
}

bool is_cyclotomic(const LGraph& g) {
    for (int v = 0; v < g.n(); ++v) {
        if (weighted_degree(g, v) > 4) return false;
    }
    std::vector<std::int64_t> c;
    if (char_poly_i64(g, c)) return spectrum_within_two(c.data(), g.n());
    return is_cyclotomic_spectrum(char_poly(g));
}

// ---------------------------------------------------------- structure ops

LGraph induced_subgraph(const LGraph& g, const std::vector<int>& vs) {
    if (vs.empty()) throw ValidationError("induced subgraph needs a nonempty vertex set");
    const int m = static_cast<int>(vs.size());
    for (int i = 0; i < m; ++i) {
        if (vs[static_cast<std::size_t>(i)] < 0 || vs[static_cast<std::size_t>(i)] >= g.n()) {
            throw ValidationError("vertex index out of range");
        }
        for (int j = 0; j < i; ++j) {
            if (vs[static_cast<std::size_t>(i)] == vs[static_cast<std::size_t>(j)]) throw ValidationError("repeated vertex");
        }
    }
    LGraph h(g.ring(), m);
    for (int i = 0; i < m; ++i) {
        const int a = vs[static_cast<std::size_t>(i)];
        h.set_charge(i, g.charge(a));
        for (int j = i + 1; j < m; ++j) {
            const int b = vs[static_cast<std::size_t>(j)];
            if (g.adjacent(a, b)) h.set_entry(i, j, g.entry(a, b));
        }
    }
    return h;
}

LGraph delete_vertex(const LGraph& g, int v) {
    std::vector<int> keep;
    for (int u = 0; u < g.n(); ++u) {
        if (u != v) keep.push_back(u);
    }
    return induced_subgraph(g, keep);
}

std::vector<std::vector<int>> components(const LGraph& g) {
    std::vector<int> comp(static_cast<std::size_t>(g.n()), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.n(); ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{s};
        comp[static_cast<std::size_t>(s)] = id;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            out.back().push_back(v);
            for (int u = 0; u < g.n(); ++u) {
                if (comp[static_cast<std::size_t>(u)] < 0 && g.adjacent(v, u)) {
                    comp[static_cast<std::size_t>(u)] = id;
                    stack.push_back(u);
                }
            }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

bool is_connected(const LGraph& g) { return components(g).size() <= 1; }

LGraph switch_vertex(const LGraph& g, int v) {
    if (v < 0 || v >= g.n()) throw ValidationError("vertex index out of range");
    LGraph h = g;
    for (int u = 0; u < g.n(); ++u) {
        if (u != v && g.adjacent(v, u)) h.set_entry(v, u, -g.entry(v, u));
    }
    return h;
}

LGraph negate(const LGraph& g) {
    LGraph h(g.ring(), g.n());
    for (int i = 0; i < g.n(); ++i) {
        h.set_charge(i, -g.charge(i));
        for (int j = i + 1; j < g.n(); ++j) {
            if (g.adjacent(i, j)) h.set_entry(i, j, -g.entry(i, j));
        }
    }
    return h;
}

LGraph conjugate(const LGraph& g) {
    LGraph h(g.ring(), g.n());
    for (int i = 0; i < g.n(); ++i) {
        h.set_charge(i, g.charge(i));
        for (int j = i + 1; j < g.n(); ++j) {
            if (g.adjacent(i, j)) h.set_entry(i, j, g.entry(i, j).conjugate());
        }
    }
    return h;
}

LGraph permute(const LGraph& g, const std::vector<int>& perm) {
    const int n = g.n();
    if (static_cast<int>(perm.size()) != n) throw ValidationError("permutation length differs from n");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int p : perm) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) throw ValidationError("not a permutation");
        seen[static_cast<std::size_t>(p)] = 1;
    }
    LGraph h(g.ring(), n);
    for (int i = 0; i < n; ++i) {
        h.set_charge(perm[static_cast<std::size_t>(i)], g.charge(i));
        for (int j = i + 1; j < n; ++j) {
            if (g.adjacent(i, j)) h.set_entry(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)], g.entry(i, j));
        }
    }
    return h;
}

LGraph add_vertex(const LGraph& g, const std::vector<QuadInt>& c, std::int64_t x) {
    if (static_cast<int>(c.size()) != g.n()) throw ValidationError("column length differs from n");
    if (x < -1 || x > 1) throw ValidationError("added vertex charge must be in {-1, 0, 1}");
    const int n = g.n();
    LGraph h(g.ring(), n + 1);
    for (int i = 0; i < n; ++i) {
        h.set_charge(i, g.charge(i));
        for (int j = i + 1; j < n; ++j) {
            if (g.adjacent(i, j)) h.set_entry(i, j, g.entry(i, j));
        }
        if (!c[static_cast<std::size_t>(i)].is_zero()) h.set_entry(i, n, c[static_cast<std::size_t>(i)]);
    }
    h.set_charge(n, x);
    return h;
}

// --------------------------------------------------------- canonical form

std::uint32_t entry_code(std::int64_t norm, std::int64_t x, std::int64_t y) {
    if (norm == 0) return 0;
    return static_cast<std::uint32_t>(norm * 4096 + (x + 32) * 64 + (y + 32));
}

namespace {

constexpr int kInvariantWidth = 8;

// Entry codes and vertex invariants of one global (negation, conjugation) image.
struct FlagView {
    int n = 0;
    std::vector<std::uint32_t> pos;  // code of entry (i, j)
    std::vector<std::uint32_t> neg;  // code of -entry (i, j)
    std::vector<std::int64_t> charge;
    std::vector<std::array<std::uint32_t, kInvariantWidth>> inv;
    std::vector<std::uint64_t> nbr;

    FlagView(const LGraph& g, bool negated, bool conjugated) : n(g.n()) {
        const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        pos.assign(nn, 0);
        neg.assign(nn, 0);
        charge.resize(static_cast<std::size_t>(n));
        inv.resize(static_cast<std::size_t>(n));
        nbr.assign(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) {
            charge[static_cast<std::size_t>(i)] = negated ? -g.charge(i) : g.charge(i);
            for (int j = 0; j < n; ++j) {
                if (i == j || !g.adjacent(i, j)) continue;
                std::int64_t x = g.ex(i, j);
                std::int64_t y = g.ey(i, j);
                if (negated) {
                    x = -x;
                    y = -y;
                }
                if (conjugated) y = -y;
                const std::int64_t nm = g.norm(i, j);
                const std::size_t k = static_cast<std::size_t>(i * n + j);
                pos[k] = entry_code(nm, x, y);
                neg[k] = entry_code(nm, -x, -y);
                nbr[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
            }
        }
        for (int i = 0; i < n; ++i) {
            auto& a = inv[static_cast<std::size_t>(i)];
            a.fill(0);
            const std::int64_t c = charge[static_cast<std::size_t>(i)];
            a[0] = static_cast<std::uint32_t>(c + 1024);
            std::int64_t wd = c * c;
            for (int j = 0; j < n; ++j) {
                if (i == j || !g.adjacent(i, j)) continue;
                const std::int64_t nm = g.norm(i, j);
                wd += nm;
                a[2] += 1;
                a[static_cast<std::size_t>(std::min<std::int64_t>(nm, 5)) + 2] += 1;
            }
            a[1] = static_cast<std::uint32_t>(wd);
        }
    }
    std::uint32_t code(int i, int j, int sign) const {
        const std::size_t k = static_cast<std::size_t>(i * n + j);
        return sign > 0 ? pos[k] : neg[k];
    }
};

struct OrderState {
    std::vector<int> order;
    std::vector<int> sign;  // indexed by vertex
    std::uint64_t placed = 0;
};

struct ComponentCanon {
    std::vector<std::uint32_t> key;
    OrderState state;
};

// Minimal token sequence over connected orderings of one component, with the
// switching of each new vertex fixed by its first nonzero entry.
ComponentCanon canon_component(const FlagView& v, const std::vector<int>& comp) {
    const int m = static_cast<int>(comp.size());
    std::vector<std::uint32_t> key;
    std::vector<OrderState> states;
    {
        std::vector<std::uint32_t> best;
        for (int u : comp) {
            std::vector<std::uint32_t> tok(v.inv[static_cast<std::size_t>(u)].begin(), v.inv[static_cast<std::size_t>(u)].end());
            if (states.empty() || tok < best) {
                best = tok;
                states.clear();
            }
            if (tok == best) {
                OrderState s;
                s.order.push_back(u);
                s.sign.assign(static_cast<std::size_t>(v.n), 1);
                s.placed = std::uint64_t{1} << u;
                states.push_back(std::move(s));
            }
        }
        key = best;
    }
    std::vector<std::uint32_t> tok;
    std::vector<std::uint32_t> best;
    for (int level = 1; level < m; ++level) {
        std::vector<OrderState> next;
        best.clear();
        bool have = false;
        for (const auto& st : states) {
            for (int u : comp) {
                const std::uint64_t bit = std::uint64_t{1} << u;
                if ((st.placed & bit) || !(v.nbr[static_cast<std::size_t>(u)] & st.placed)) continue;
                tok.assign(v.inv[static_cast<std::size_t>(u)].begin(), v.inv[static_cast<std::size_t>(u)].end());
                int su = 0;
                for (int p : st.order) {
                    const std::size_t k = static_cast<std::size_t>(p * v.n + u);
                    if (v.pos[k] == 0) {
                        tok.push_back(0);
                        continue;
                    }
                    if (su == 0) {
                        const int sp = st.sign[static_cast<std::size_t>(p)];
                        su = v.code(p, u, sp) <= v.code(p, u, -sp) ? 1 : -1;
                    }
                    tok.push_back(v.code(p, u, st.sign[static_cast<std::size_t>(p)] * su));
                }
                if (have && tok > best) continue;
                if (!have || tok < best) {
                    best = tok;
                    next.clear();
                    have = true;
                }
                OrderState ns = st;
                ns.order.push_back(u);
                ns.sign[static_cast<std::size_t>(u)] = su;
                ns.placed |= bit;
                next.push_back(std::move(ns));
            }
        }
        key.insert(key.end(), best.begin(), best.end());
        states = std::move(next);
    }
    return ComponentCanon{std::move(key), std::move(states.front())};
}

void append_u32(std::string& s, std::uint32_t v) {
    for (int sh = 24; sh >= 0; sh -= 8) s.push_back(static_cast<char>((v >> sh) & 0xff));
}

struct FlagCanon {
    std::string key;
    std::vector<ComponentCanon> parts;
};

FlagCanon canon_flag(const LGraph& g, bool negated, bool conjugated, const std::vector<std::vector<int>>& comps) {
    const FlagView v(g, negated, conjugated);
    std::vector<ComponentCanon> parts;
    for (const auto& c : comps) parts.push_back(canon_component(v, c));
    std::stable_sort(parts.begin(), parts.end(), [](const ComponentCanon& a, const ComponentCanon& b) {
        if (a.state.order.size() != b.state.order.size()) return a.state.order.size() > b.state.order.size();
        return a.key < b.key;
    });
    FlagCanon out;
    append_u32(out.key, static_cast<std::uint32_t>(g.n()));
    for (const auto& p : parts) {
        append_u32(out.key, static_cast<std::uint32_t>(p.state.order.size()));
        for (auto x : p.key) append_u32(out.key, x);
    }
    out.parts = std::move(parts);
    return out;
}

}  // namespace

CanonicalForm canonical_form(const LGraph& g) {
    if (g.n() < 1) throw ValidationError("canonical form needs n >= 1");
    if (g.n() > 64) throw ValidationError("canonical form supports at most 64 vertices");
    const auto comps = components(g);
    FlagCanon best;
    int best_flag = -1;
    for (int f = 0; f < 4; ++f) {
        FlagCanon c = canon_flag(g, (f & 1) != 0, (f & 2) != 0, comps);
        if (best_flag < 0 || c.key < best.key) {
            best = std::move(c);
            best_flag = f;
        }
    }
    LGraph h = g;
    if (best_flag & 1) h = negate(h);
    if (best_flag & 2) h = conjugate(h);
    std::vector<int> perm(static_cast<std::size_t>(g.n()));
    std::vector<int> sign(static_cast<std::size_t>(g.n()), 1);
    int next = 0;
    for (const auto& p : best.parts) {
        for (int u : p.state.order) {
            perm[static_cast<std::size_t>(u)] = next++;
            sign[static_cast<std::size_t>(u)] = p.state.sign[static_cast<std::size_t>(u)];
        }
    }
    for (int u = 0; u < g.n(); ++u) {
        if (sign[static_cast<std::size_t>(u)] < 0) h = switch_vertex(h, u);
    }
    std::string key;
    append_u32(key, static_cast<std::uint32_t>(-g.ring().d));
    key += best.key;
    return CanonicalForm{permute(h, perm), std::move(key)};
}

std::string canonical_key(const LGraph& g) { return canonical_form(g).key; }

std::string key_to_hex(const std::string& key) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(key.size() * 2);
    for (unsigned char c : key) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    return out;
}

std::string key_from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw ValidationError("odd-length hex key");
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw ValidationError("bad hex digit in key");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) out.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
    return out;
}

bool is_equivalent(const LGraph& a, const LGraph& b) {
    if (!(a.ring() == b.ring()) || a.n() != b.n()) return false;
    return canonical_key(a) == canonical_key(b);
}

// ---------------------------------------------------------------- patterns

namespace {

FormPattern make_pattern(std::string name, std::vector<ChargeRule> charges) {
    FormPattern p;
    p.name = std::move(name);
    const std::size_t k = charges.size();
    p.charges = std::move(charges);
    p.edges.assign(k, std::vector<PatternEdge>(k));
    return p;
}

void set_edge(FormPattern& p, int a, int b, EdgeRule rule, int w = 0) {
    p.edges[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = PatternEdge{rule, w};
    p.edges[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = PatternEdge{rule, w};
}

}  // namespace

FormPattern pattern_x2() {
    auto p = make_pattern("X2", {ChargeRule::charged, ChargeRule::any});
    set_edge(p, 0, 1, EdgeRule::weight, 2);
    return p;
}

FormPattern pattern_x3a() {
    auto p = make_pattern("X3A", {ChargeRule::zero, ChargeRule::zero, ChargeRule::zero});
    set_edge(p, 0, 2, EdgeRule::weight, 2);
    set_edge(p, 2, 1, EdgeRule::weight, 2);
    set_edge(p, 0, 1, EdgeRule::weight, 1);
    return p;
}

FormPattern pattern_x3b() {
    auto p = make_pattern("X3B", {ChargeRule::zero, ChargeRule::zero, ChargeRule::zero});
    set_edge(p, 0, 1, EdgeRule::weight, 2);
    set_edge(p, 0, 2, EdgeRule::weight, 1);
    set_edge(p, 2, 1, EdgeRule::weight, 1);
    return p;
}

FormPattern pattern_x4a() {
    auto p = make_pattern("X4A", {ChargeRule::zero, ChargeRule::zero, ChargeRule::zero, ChargeRule::any});
    set_edge(p, 0, 1, EdgeRule::weight, 2);
    set_edge(p, 1, 2, EdgeRule::weight, 2);
    set_edge(p, 2, 3, EdgeRule::weight, 1);
    return p;
}

FormPattern pattern_x4b() {
    // a = 0, b = 1, c = 2, d = 3; the c-d pair is unconstrained.
    auto p = make_pattern("X4B", {ChargeRule::zero, ChargeRule::zero, ChargeRule::zero, ChargeRule::zero});
    set_edge(p, 0, 1, EdgeRule::weight, 2);
    set_edge(p, 0, 2, EdgeRule::weight, 1);
    set_edge(p, 3, 1, EdgeRule::weight, 1);
    set_edge(p, 2, 3, EdgeRule::free);
    return p;
}

std::optional<std::vector<int>> contains_form(const LGraph& g, const FormPattern& pat, int anchor) {
    const int k = pat.size();
    if (k > g.n()) return std::nullopt;
    std::vector<int> map(static_cast<std::size_t>(k), -1);
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    auto charge_ok = [&](int i, int v) {
        const std::int64_t c = g.charge(v);
        switch (pat.charges[static_cast<std::size_t>(i)]) {
            case ChargeRule::zero: return c == 0;
            case ChargeRule::any: return true;
            case ChargeRule::charged: return c != 0;
        }
        return false;
    };
    auto edge_ok = [&](const PatternEdge& e, int u, int v) {
        const std::int64_t nm = g.norm(u, v);
        switch (e.rule) {
            case EdgeRule::absent: return nm == 0;
            case EdgeRule::weight: return nm == e.weight;
            case EdgeRule::nonzero: return nm != 0;
            case EdgeRule::free: return true;
        }
        return false;
    };
    // Pattern positions are filled in `order`; with an anchor, order[0] is
    // pinned to it.
    std::vector<int> order(static_cast<std::size_t>(k));
    std::function<bool(int)> place = [&](int t) -> bool {
        if (t == k) return true;
        const int i = order[static_cast<std::size_t>(t)];
        for (int v = 0; v < g.n(); ++v) {
            if (t == 0 && anchor >= 0 && v != anchor) continue;
            if (used[static_cast<std::size_t>(v)] || !charge_ok(i, v)) continue;
            bool ok = true;
            for (int q = 0; q < t && ok; ++q) {
                const int j = order[static_cast<std::size_t>(q)];
                ok = edge_ok(pat.edges[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], v, map[static_cast<std::size_t>(j)]);
            }
            if (!ok) continue;
            map[static_cast<std::size_t>(i)] = v;
            used[static_cast<std::size_t>(v)] = 1;
            if (place(t + 1)) return true;
            used[static_cast<std::size_t>(v)] = 0;
        }
        return false;
    };
    const int firsts = anchor >= 0 ? k : 1;
    for (int p = 0; p < firsts; ++p) {
        order[0] = p;
        int t = 1;
        for (int i = 0; i < k; ++i) {
            if (i != p) order[static_cast<std::size_t>(t++)] = i;
        }
        if (place(0)) return map;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------- IO

std::string graph_json_line(const LGraph& g) {
    nlohmann::json j;
    j["d"] = g.ring().d;
    j["n"] = g.n();
    std::vector<std::int64_t> charges;
    for (int i = 0; i < g.n(); ++i) charges.push_back(g.charge(i));
    j["charges"] = charges;
    nlohmann::json upper = nlohmann::json::array();
    for (int i = 0; i < g.n(); ++i) {
        for (int k = i + 1; k < g.n(); ++k) {
            if (g.adjacent(i, k)) {
                upper.push_back({g.ex(i, k), g.ey(i, k)});
            } else {
                upper.push_back(nullptr);
            }
        }
    }
    j["upper"] = upper;
    return j.dump();
}

LGraph graph_from_json_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed graph record: ") + e.what());
    }
    try {
        const RingSpec ring = ring_make(j.at("d").get<std::int64_t>());
        const int n = j.at("n").get<int>();
        const auto charges = j.at("charges").get<std::vector<std::int64_t>>();
        std::vector<std::optional<QuadInt>> upper;
        for (const auto& e : j.at("upper")) {
            if (e.is_null()) {
                upper.emplace_back();
            } else {
                if (!e.is_array() || e.size() != 2) throw ValidationError("edge label must be [x, y] or null");
                upper.emplace_back(QuadInt(ring, e[0].get<std::int64_t>(), e[1].get<std::int64_t>()));
            }
        }
        return graph_make(ring, n, charges, upper);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed graph record: ") + e.what());
    }
}

std::string write_graph(const LGraph& g) { return "lgraph 1\n" + graph_json_line(g) + "\n"; }

LGraph read_graph(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    std::getline(is, header);
    while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) header.pop_back();
    if (header != "lgraph 1") throw ValidationError("graph file must start with 'lgraph 1'");
    std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return graph_from_json_line(rest);
}

}  // namespace lehmer
