#pragma once

#include "lehmer/lgraph.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lehmer {

/// Column vectors for single-vertex additions.
struct ColumnSpec {
    int n = 0;
    std::vector<QuadInt> pool;            ///< Must contain 0 when reduced counting is wanted.
    bool reduced = true;                  ///< One of each pair {c, -c}: first nonzero entry positive.
    std::optional<std::int64_t> bound;    ///< Sum of entry norms at most bound.
    std::vector<std::int64_t> caps;       ///< Optional per-position norm cap; empty = none.
};

/// Streams nonzero vectors in lexicographic order of pool position.
/// The callback returns false to stop early. Returns the number visited.
std::size_t enumerate_columns(const ColumnSpec& spec, const std::function<bool(const std::vector<QuadInt>&)>& fn);
std::vector<std::vector<QuadInt>> column_list(const ColumnSpec& spec);

/// Positive member of {q, -q}: x > 0, or x = 0 and y > 0.
bool is_positive(const QuadInt& q);

enum class AdditionClass { cyclotomic, noncyclotomic };
std::string to_string(AdditionClass c);

AdditionClass classify_addition(const LGraph& g_super);

/// Noncyclotomic with every vertex-deleted subgraph cyclotomic. Throws
/// std::logic_error if such a graph with n >= 2 is disconnected.
bool is_minimal_noncyclotomic(const LGraph& g);

/// Evaluates additions to a fixed cyclotomic base without materialising the
/// supergraph. Safe for concurrent const use.
class AdditionProbe {
  public:
    explicit AdditionProbe(const LGraph& base);

    const LGraph& base() const { return base_; }
    std::int64_t weighted_degree(int v) const { return wd_[static_cast<std::size_t>(v)]; }

    /// Raw numerators (x_i, y_i) of the column over the ring scale.
    bool cyclotomic(const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) const;
    /// For a noncyclotomic addition: every vertex-deleted subgraph is cyclotomic.
    /// The base itself is cyclotomic, so only old vertices are deleted.
    bool minimal(const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) const;

  private:
    bool deleted_cyclotomic(int u, const std::int64_t* cx, const std::int64_t* cy, std::int64_t charge) const;

    LGraph base_;
    ExtensionCharPoly ext_;
    std::vector<std::int64_t> wd_;
    std::vector<LGraph> minus_;                 // base - u
    std::vector<ExtensionCharPoly> minus_ext_;  // extensions of base - u
};

struct GrowthFilterSet {
    bool x3a = false;  ///< type I, matched on proper containment only
    bool x4a = false;  ///< type I, matched on proper containment only
    bool x2 = false;
    bool x3b = false;
    bool x4b = false;
    bool degree_cap = false;  ///< every weighted degree at most 4

    static GrowthFilterSet none() { return {}; }
    static GrowthFilterSet all() { return {true, true, true, true, true, true}; }
    bool any() const { return x3a || x4a || x2 || x3b || x4b || degree_cap; }
};

struct FilterVerdict {
    bool keep = true;
    std::string reason;          ///< Pattern name or "degree".
    std::vector<int> witness;    ///< Matched vertices, or the offending vertex.
};

/// With anchor >= 0 only pattern matches through that vertex are considered.
FilterVerdict apply_filters(const LGraph& g, const GrowthFilterSet& f, int anchor = -1);

}  // namespace lehmer
