#include "lehmer/grow.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace lehmer {

bool is_positive(const QuadInt& q) { return q.x() > 0 || (q.x() == 0 && q.y() > 0); }

std::size_t enumerate_columns(const ColumnSpec& spec, const std::function<bool(const std::vector<QuadInt>&)>& fn) {
    if (spec.pool.empty()) throw ValidationError("empty label pool");
    if (spec.n < 1) throw ValidationError("column length must be at least 1");
    if (!spec.caps.empty() && static_cast<int>(spec.caps.size()) != spec.n) throw ValidationError("caps length differs from n");
    const RingSpec ring = spec.pool.front().ring();
    const QuadInt zero(ring, 0, 0);
    const bool has_zero = std::find(spec.pool.begin(), spec.pool.end(), zero) != spec.pool.end();
    std::vector<QuadInt> nonzero;
    for (const auto& q : spec.pool) {
        if (!q.is_zero()) nonzero.push_back(q);
    }
    const std::int64_t bound = spec.bound.value_or(INT64_MAX);
    std::vector<QuadInt> cur(static_cast<std::size_t>(spec.n), zero);
    std::size_t count = 0;
    bool stop = false;
    // Position i takes 0 first (when pooled), then nonzero labels in pool order.
    std::function<void(int, std::int64_t, bool)> rec = [&](int i, std::int64_t used, bool any) {
        if (stop) return;
        if (i == spec.n) {
            if (!any) return;
            ++count;
            if (!fn(cur)) stop = true;
            return;
        }
        if (has_zero) {
            cur[static_cast<std::size_t>(i)] = zero;
            rec(i + 1, used, any);
        }
        for (const auto& q : nonzero) {
            if (stop) return;
            const std::int64_t nm = q.norm();
            if (used + nm > bound) continue;
            if (!spec.caps.empty() && nm > spec.caps[static_cast<std::size_t>(i)]) continue;
            if (spec.reduced && !any && !is_positive(q)) continue;
            cur[static_cast<std::size_t>(i)] = q;
            rec(i + 1, used + nm, true);
        }
        cur[static_cast<std::size_t>(i)] = zero;
    };
    rec(0, 0, false);
    return count;
}

std::vector<std::vector<QuadInt>> column_list(const ColumnSpec& spec) {
    std::vector<std::vector<QuadInt>> out;
    enumerate_columns(spec, [&](const std::vector<QuadInt>& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

std::string to_string(AdditionClass c) { return c == AdditionClass::cyclotomic ? "cyclotomic" : "noncyclotomic"; }

AdditionClass classify_addition(const LGraph& g_super) {
    return is_cyclotomic(g_super) ? AdditionClass::cyclotomic : AdditionClass::noncyclotomic;
}

bool is_minimal_noncyclotomic(const LGraph& g) {
    if (is_cyclotomic(g)) return false;
    for (int u = 0; u < g.n(); ++u) {
        if (g.n() > 1 && !is_cyclotomic(delete_vertex(g, u))) return false;
    }
    if (g.n() >= 2 && !is_connected(g)) throw std::logic_error("disconnected minimal noncyclotomic graph");
    return true;
}

// ------------------------------------------------------------------- probe

AdditionProbe::AdditionProbe(const LGraph& base) : base_(base), ext_(base) {
    const int n = base.n();
    for (int v = 0; v < n; ++v) wd_.push_back(lehmer::weighted_degree(base, v));
    if (n >= 2) {
        minus_.reserve(static_cast<std::size_t>(n));
        minus_ext_.reserve(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) {
            minus_.push_back(delete_vertex(base, u));
            minus_ext_.emplace_back(minus_.back());
        }
    }
}

namespace {

LGraph materialise(const LGraph& base, const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) {
    std::vector<QuadInt> col;
    col.reserve(static_cast<std::size_t>(base.n()));
    for (int i = 0; i < base.n(); ++i) col.emplace_back(base.ring(), cx[i], cy[i]);
    return add_vertex(base, col, charge);
}

}  // namespace

bool AdditionProbe::cyclotomic(const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) const {
    const int n = base_.n();
    const std::int64_t s2 = base_.ring().s * base_.ring().s;
    std::int64_t total = charge * charge;
    for (int i = 0; i < n; ++i) {
        if (cx[i] == 0 && cy[i] == 0) continue;
        const std::int64_t nm = (cx[i] * cx[i] - base_.ring().d * cy[i] * cy[i]) / s2;
        if (wd_[static_cast<std::size_t>(i)] + nm > 4) return false;
        total += nm;
    }
    if (total > 4) return false;
    thread_local std::vector<std::int64_t> coeffs;
    if (ext_.compute(cx, cy, charge, coeffs)) return spectrum_within_two(coeffs.data(), n + 1);
    return is_cyclotomic(materialise(base_, cx, cy, charge));
}

bool AdditionProbe::deleted_cyclotomic(int u, const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) const {
    const int n = base_.n();
    const RingSpec& r = base_.ring();
    const std::int64_t s2 = r.s * r.s;
    auto nm = [&](std::int64_t x, std::int64_t y) { return (x * x - r.d * y * y) / s2; };
    std::int64_t total = charge * charge;
    thread_local std::vector<std::int64_t> sx;
    thread_local std::vector<std::int64_t> sy;
    sx.assign(static_cast<std::size_t>(n), 0);
    sy.assign(static_cast<std::size_t>(n), 0);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        if (i == u) continue;
        const std::int64_t ci = nm(cx[i], cy[i]);
        total += ci;
        std::int64_t wd = wd_[static_cast<std::size_t>(i)] + ci;
        if (base_.adjacent(i, u)) wd -= base_.norm(i, u);
        if (wd > 4) return false;
        sx[k] = cx[i];
        sy[k] = cy[i];
        ++k;
    }
    if (total > 4) return false;
    thread_local std::vector<std::int64_t> coeffs;
    if (minus_ext_[static_cast<std::size_t>(u)].compute(sx.data(), sy.data(), charge, coeffs)) {
        return spectrum_within_two(coeffs.data(), n);
    }
    std::vector<int> keep;
    for (int i = 0; i <= n; ++i) {
        if (i != u) keep.push_back(i);
    }
    return is_cyclotomic(induced_subgraph(materialise(base_, cx, cy, charge), keep));
}

bool AdditionProbe::minimal(const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) const {
    const int n = base_.n();
    if (n == 1) return true;  // the remaining single vertex has charge in {-1, 0, 1}
    for (int u = 0; u < n; ++u) {
        if (!deleted_cyclotomic(u, cx, cy, charge)) return false;
    }
    return true;
}

// ----------------------------------------------------------------- filters

FilterVerdict apply_filters(const LGraph& g, const GrowthFilterSet& f, int anchor) {
    FilterVerdict v;
    if (f.degree_cap) {
        for (int i = 0; i < g.n(); ++i) {
            if (weighted_degree(g, i) > 4) {
                v.keep = false;
                v.reason = "degree";
                v.witness = {i};
                return v;
            }
        }
    }
    auto check = [&](bool on, const FormPattern& pat, bool proper) {
        if (!on || !v.keep) return;
        if (proper && g.n() <= pat.size()) return;
        if (auto w = contains_form(g, pat, anchor)) {
            v.keep = false;
            v.reason = pat.name;
            v.witness = *w;
        }
    };
    check(f.x2, pattern_x2(), false);
    check(f.x3a, pattern_x3a(), true);
    check(f.x3b, pattern_x3b(), false);
    check(f.x4a, pattern_x4a(), true);
    check(f.x4b, pattern_x4b(), false);
    return v;
}

}  // namespace lehmer
