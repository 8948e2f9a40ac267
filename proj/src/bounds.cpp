#include "lehmer/search.hpp"

namespace lehmer {

namespace {

class Sweep {
  public:
    Sweep(std::string name, std::string family, const char* threshold, const mpq_class& tol) : tol_(tol) {
        c_.name = std::move(name);
        c_.family = std::move(family);
        c_.threshold = parse_rational(threshold);
    }

    void not_applicable() { c_.applicable = false; }

    /// Counts p; noncyclotomic members enter the minimum.
    void add(const IntPoly& p, const std::optional<LGraph>& witness) {
        ++c_.count;
        if (is_cyclotomic_spectrum(p)) return;
        ++c_.qualifying;
        MahlerResult m = mahler_real_rooted(p, tol_);
        m.witnesses.clear();
        if (!c_.minimum || m.upper < c_.minimum->upper) {
            c_.minimum = std::move(m);
            c_.witness = witness;
        }
    }

    void add(const LGraph& g) { add(char_poly(g), g); }

    BoundCheck finish() {
        if (!c_.applicable) {
            c_.pass = true;
            return c_;
        }
        if (c_.minimum) {
            c_.pass = c_.minimum->lower >= c_.threshold;
            c_.straddles = c_.minimum->lower < c_.threshold && c_.threshold <= c_.minimum->upper;
        }
        return c_;
    }

  private:
    BoundCheck c_;
    mpq_class tol_;
};

IntPoly quadratic(std::int64_t trace, std::int64_t det) { return IntPoly{det, -trace, 1}; }

std::optional<LGraph> pair_witness(const RingSpec& r, std::int64_t b, std::int64_t c, std::int64_t norm) {
    const auto elems = enumerate_norm(r, norm);
    if (elems.empty()) return std::nullopt;
    LGraph g(r, 2);
    g.set_charge(0, b);
    g.set_charge(1, c);
    g.set_entry(0, 1, elems.front());
    return g;
}

std::vector<QuadInt> labels_up_to(const RingSpec& r, std::int64_t max_norm) {
    std::vector<QuadInt> out;
    for (const auto& q : label_set(r, LabelTag::full_l).members) {
        if (q.norm() <= max_norm) out.push_back(q);
    }
    return out;
}

// A two-vertex graph with edge w plus a third vertex joined by alpha, beta.
void sweep_third_vertex(Sweep& s, const RingSpec& r, const std::vector<QuadInt>& labels, const QuadInt& w,
                        std::int64_t a, std::int64_t b) {
    for (const auto& alpha : labels) {
        for (const auto& beta : labels) {
            if (alpha.is_zero() && beta.is_zero()) continue;
            for (std::int64_t x : {-1, 0, 1}) {
                LGraph g(r, 3);
                g.set_charge(0, a);
                g.set_charge(1, b);
                g.set_charge(2, x);
                g.set_entry(0, 1, w);
                if (!alpha.is_zero()) g.set_entry(0, 2, alpha);
                if (!beta.is_zero()) g.set_entry(1, 2, beta);
                s.add(g);
            }
        }
    }
}

LGraph s4_prime(const RingSpec& r, const QuadInt& w) {
    LGraph g(r, 4);
    g.set_entry(0, 1, w);
    g.set_entry(2, 3, -w);
    g.set_entry(0, 2, QuadInt::integer(r, 1));
    g.set_entry(1, 3, QuadInt::integer(r, 1));
    return g;
}

}  // namespace

std::vector<BoundCheck> verify_bounds(std::int64_t d, const mpq_class& tol) {
    const RingSpec r = ring_make(d);
    std::vector<BoundCheck> out;

    {
        Sweep s("diagonal>=3", "1x1 (m), |m| = 3..12", "2.618", tol);
        for (std::int64_t m = 3; m <= 12; ++m) {
            for (std::int64_t sgn : {1, -1}) {
                LGraph g(r, 1);
                g.set_charge(0, sgn * m);
                s.add(g);
            }
        }
        out.push_back(s.finish());
    }
    {
        // The characteristic polynomial depends on the entry only through its norm.
        Sweep s("offdiag-norm>=5", "2x2 [[b, a], [conj a, c]], |b|, |c| <= 2, norm a = 5..12", "2.36", tol);
        for (std::int64_t n = 5; n <= 12; ++n) {
            for (std::int64_t b = -2; b <= 2; ++b) {
                for (std::int64_t c = -2; c <= 2; ++c) s.add(quadratic(b + c, b * c - n), pair_witness(r, b, c, n));
            }
        }
        out.push_back(s.finish());
    }
    {
        Sweep s("diagonal=2", "2x2 [[2, a], [conj a, b]], |b| <= 2, norm a = 1..4", "1.722", tol);
        for (std::int64_t n = 1; n <= 4; ++n) {
            for (std::int64_t b = -2; b <= 2; ++b) s.add(quadratic(2 + b, 2 * b - n), pair_witness(r, 2, b, n));
        }
        out.push_back(s.finish());
    }
    {
        Sweep s("weight4", "charged weight-4 edge; uncharged weight-4 edge plus a vertex joined by alpha, beta in L",
                "2.08", tol);
        const auto l4 = enumerate_norm(r, 4);
        for (const auto& w : l4) {
            for (std::int64_t a : {-1, 0, 1}) {
                for (std::int64_t b : {-1, 0, 1}) {
                    if (a == 0 && b == 0) continue;
                    LGraph g(r, 2);
                    g.set_charge(0, a);
                    g.set_charge(1, b);
                    g.set_entry(0, 1, w);
                    s.add(g);
                }
            }
            sweep_third_vertex(s, r, labels_up_to(r, 4), w, 0, 0);
        }
        if (l4.empty()) s.not_applicable();
        out.push_back(s.finish());
    }
    const auto l3 = enumerate_norm(r, 3);
    {
        // Edges of weight 4 are covered by the weight-4 sweep.
        Sweep s("weight3-charged-pair",
                "S2' (charges +, -, weight-3 edge) plus a vertex joined by alpha, beta of weight at most 3", "2.52", tol);
        for (const auto& w : l3) sweep_third_vertex(s, r, labels_up_to(r, 3), w, 1, -1);
        if (l3.empty()) s.not_applicable();
        out.push_back(s.finish());
    }
    {
        Sweep s("weight3-small",
                "minimal noncyclotomic graphs on a weight-3 edge: charged 2-vertex edges, and induced subgraphs of "
                "S4' plus one vertex joined by labels of weight at most 3",
                "1.56", tol);
        const auto labels = labels_up_to(r, 3);
        for (const auto& w : l3) {
            for (std::int64_t a : {-1, 0, 1}) {
                for (std::int64_t b : {-1, 0, 1}) {
                    if (a == 0 && b == 0) continue;
                    LGraph g(r, 2);
                    g.set_charge(0, a);
                    g.set_charge(1, b);
                    g.set_entry(0, 1, w);
                    if (is_minimal_noncyclotomic(g)) s.add(g);
                }
            }
            const LGraph base = s4_prime(r, w);
            for (int mask = 1; mask < 16; ++mask) {
                std::vector<int> vs;
                for (int i = 0; i < 4; ++i) {
                    if (mask & (1 << i)) vs.push_back(i);
                }
                const bool e01 = (mask & 3) == 3;
                const bool e23 = (mask & 12) == 12;
                if (!e01 && !e23) continue;
                const LGraph h = induced_subgraph(base, vs);
                ColumnSpec spec{h.n(), labels, true, std::nullopt, {}};
                enumerate_columns(spec, [&](const std::vector<QuadInt>& c) {
                    for (std::int64_t x : {-1, 0, 1}) {
                        LGraph g = add_vertex(h, c, x);
                        if (is_minimal_noncyclotomic(g)) s.add(g);
                    }
                    return true;
                });
            }
        }
        if (l3.empty()) s.not_applicable();
        out.push_back(s.finish());
    }
    return out;
}

}  // namespace lehmer
