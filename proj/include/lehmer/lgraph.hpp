#pragma once

#include "lehmer/polynomial.hpp"
#include "lehmer/quadint.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lehmer {

/// Hermitian matrix over the ring, read as a graph: diagonal entries are
/// vertex charges, off-diagonal entries are edge labels. Entry (j, i) is
/// always the conjugate of entry (i, j).
class LGraph {
  public:
    LGraph() = default;
    LGraph(RingSpec ring, int n);

    const RingSpec& ring() const { return ring_; }
    int n() const { return n_; }

    std::int64_t charge(int v) const { return charge_[static_cast<std::size_t>(v)]; }
    void set_charge(int v, std::int64_t c);

    /// Entry (i, j); on the diagonal this is the charge as a ring element.
    QuadInt entry(int i, int j) const;
    /// Sets (i, j) to q and (j, i) to its conjugate; i != j.
    void set_entry(int i, int j, const QuadInt& q);

    /// Raw numerators of entry (i, j), i != j, over the ring scale s.
    std::int64_t ex(int i, int j) const { return ex_[idx(i, j)]; }
    std::int64_t ey(int i, int j) const { return ey_[idx(i, j)]; }
    bool adjacent(int i, int j) const { return i != j && (ex_[idx(i, j)] != 0 || ey_[idx(i, j)] != 0); }
    /// Norm of entry (i, j), i != j.
    std::int64_t norm(int i, int j) const;

    friend bool operator==(const LGraph& a, const LGraph& b) = default;

  private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j); }

    RingSpec ring_{};
    int n_ = 0;
    std::vector<std::int64_t> charge_;
    std::vector<std::int64_t> ex_;
    std::vector<std::int64_t> ey_;
};

/// Builds a graph from a diagonal and the row-major upper triangle (i < j),
/// absent entries as nullopt. Rejects non-rational diagonal entries, ring
/// mismatches and wrong lengths.
LGraph graph_make(RingSpec ring, int n, const std::vector<QuadInt>& diagonal,
                  const std::vector<std::optional<QuadInt>>& upper);
LGraph graph_make(RingSpec ring, int n, const std::vector<std::int64_t>& charges,
                  const std::vector<std::optional<QuadInt>>& upper);

/// Exact characteristic polynomial det(xI - A).
IntPoly char_poly(const LGraph& g);
/// Ascending coefficients in 64-bit integers; false on overflow.
bool char_poly_i64(const LGraph& g, std::vector<std::int64_t>& out);

/// Characteristic polynomials of single-vertex extensions of a fixed graph,
/// reusing the elimination state of the base.
class ExtensionCharPoly {
  public:
    explicit ExtensionCharPoly(const LGraph& base);
    /// Column entries (x_i, y_i) over the ring scale and charge of the new
    /// vertex; false on 64-bit overflow.
    bool compute(const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge,
                 std::vector<std::int64_t>& out) const;

  private:
    int n_;
    std::int64_t d_;
    std::int64_t s_;
    bool ok_ = true;
    std::vector<std::int64_t> ax_, ay_;      // s * A
    std::vector<std::int64_t> bx_, by_;      // Berkowitz vector of the base, descending
};

bool is_cyclotomic(const LGraph& g);
/// Charge squared plus the norms of all incident edges.
std::int64_t weighted_degree(const LGraph& g, int v);

LGraph induced_subgraph(const LGraph& g, const std::vector<int>& vertices);
LGraph delete_vertex(const LGraph& g, int v);
bool is_connected(const LGraph& g);
std::vector<std::vector<int>> components(const LGraph& g);

LGraph switch_vertex(const LGraph& g, int v);
LGraph negate(const LGraph& g);
LGraph conjugate(const LGraph& g);
/// Vertex i of g becomes vertex perm[i] of the result.
LGraph permute(const LGraph& g, const std::vector<int>& perm);

/// Adds vertex n with column c (c[i] = entry (i, n)) and charge x in {-1, 0, 1}.
LGraph add_vertex(const LGraph& g, const std::vector<QuadInt>& c, std::int64_t x);

struct CanonicalForm {
    LGraph graph;
    std::string key;
};

/// Least serialisation over permutations, switchings, global negation and
/// global conjugation. Equal keys exactly when graphs are equivalent.
CanonicalForm canonical_form(const LGraph& g);
std::string canonical_key(const LGraph& g);
bool is_equivalent(const LGraph& a, const LGraph& b);

/// Lowercase hex of a canonical key, and its inverse.
std::string key_to_hex(const std::string& key);
std::string key_from_hex(const std::string& hex);

/// Code of one entry in the key alphabet: 0 for zero, else ordered by
/// (norm, x, y).
std::uint32_t entry_code(std::int64_t norm, std::int64_t x, std::int64_t y);

enum class ChargeRule { zero, any, charged };
enum class EdgeRule { absent, weight, nonzero, free };

struct PatternEdge {
    EdgeRule rule = EdgeRule::absent;
    int weight = 0;
};

/// A template matched against induced subgraphs by edge weight and charge.
struct FormPattern {
    std::string name;
    std::vector<ChargeRule> charges;
    std::vector<std::vector<PatternEdge>> edges;  // symmetric

    int size() const { return static_cast<int>(charges.size()); }
};

FormPattern pattern_x2();
FormPattern pattern_x3a();
FormPattern pattern_x3b();
FormPattern pattern_x4a();
/// The table row "X4" of the type II list is read as this pattern.
FormPattern pattern_x4b();

/// Witness maps pattern vertex i to graph vertex (*result)[i]. With anchor
/// >= 0 only witnesses using that vertex count.
std::optional<std::vector<int>> contains_form(const LGraph& g, const FormPattern& pat, int anchor = -1);

/// Text interchange: "lgraph 1" header line, then one JSON object
/// {"d", "n", "charges", "upper"} with upper the row-major i < j list of
/// [x, y] pairs or null.
std::string write_graph(const LGraph& g);
LGraph read_graph(const std::string& text);
std::string graph_json_line(const LGraph& g);
LGraph graph_from_json_line(const std::string& line);

}  // namespace lehmer
