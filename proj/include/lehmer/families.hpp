#pragma once

#include "lehmer/lgraph.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace lehmer {

enum class Family {
    T2k,
    C2k_pp,
    C2k_pm,
    T2k4,
    T2k4_prime,
    C2k_2plus,
    S7,
    S8,
    S8_prime,
    S14,
    S16,
    S2,
    S2_star,
    S2_prime,
    S4_prime,
    S4,
    S4_star,
    S6_dagger,
    S8_star,
    one_by_one_pm2,
};

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);
const std::vector<Family>& all_families();
/// Families with a size parameter k.
bool family_has_k(Family f);
int family_min_k(Family f);
/// False when the family does not exist over the given ring.
bool family_applicable(Family f, std::int64_t d);

struct FamilySpec {
    Family family = Family::T2k;
    int k = 0;
    RingSpec ring;
};

/// Graph with a column layout: every edge joins vertices in the same or in
/// adjacent columns. row is 0 (top) or 1 (bottom).
struct Drawing {
    LGraph graph;
    std::vector<int> column;  // per vertex, empty when no layout is defined
    std::vector<int> row;

    bool has_layout() const { return !column.empty(); }
};

/// The family member with the edge labels and vertex numbering of its figure.
Drawing generate(const FamilySpec& spec);

/// Restriction of a drawing to a vertex subset, keeping column and row.
Drawing induced_drawing(const Drawing& d, const std::vector<int>& vertices);

/// True iff no single vertex with column over the full label set and charge
/// in {-1, 0, 1} gives a connected cyclotomic supergraph.
bool verify_maximal(const LGraph& g);

struct Embedding {
    int k = 0;
    std::vector<int> vertices;  ///< Vertices of generate(fam, k) inducing a graph equivalent to G.
};

/// Decides equivalence to an induced subgraph of some member with k <= k_max
/// by canonical key lookup. Key sets are memoised in-process and, when a
/// cache directory is set, stored on disk under a format stamp.
class EmbeddingOracle {
  public:
    EmbeddingOracle() = default;
    explicit EmbeddingOracle(std::filesystem::path cache_dir) : cache_dir_(std::move(cache_dir)) {}

    std::optional<Embedding> find(const LGraph& g, Family fam, int k_max);

  private:
    using Slot = std::tuple<int, std::int64_t, int, int>;  // family, d, k, m
    const std::map<std::string, std::vector<int>>& keys_for(Family fam, const RingSpec& ring, int k, int m);

    std::optional<std::filesystem::path> cache_dir_;
    std::map<Slot, std::map<std::string, std::vector<int>>> memo_;
    std::mutex mu_;
};

std::optional<Embedding> embeds_in_family(const LGraph& g, Family fam, int k_max);

enum class CycleKind { hourglass, parallelogram, triangular, other };
std::string to_string(CycleKind k);

struct CycleCheck {
    std::vector<int> cycle;  ///< Cyclic vertex order.
    CycleKind kind = CycleKind::other;
    int positive = 0;
    bool pass = true;
};

struct TriangleCheck {
    std::vector<int> triangle;
    int charge_sign = 0;
    int counted = 0;  ///< Positive edges for + charges, negative edges for - charges.
    bool pass = true;
};

struct ParityReport {
    std::vector<CycleCheck> cycles;
    std::vector<TriangleCheck> triangles;
    bool pass = true;
};

/// Sign label of an edge read from u to v: +1 positive, -1 negative, 0 absent.
int edge_polarity(const LGraph& g, int u, int v);

/// Parity of positive edges on every induced 4-cycle and on charged triangles.
/// Requires d in {-2, -7} and a layout satisfying the column property.
ParityReport parity_conditions(const Drawing& d);

}  // namespace lehmer
