#pragma once

#include "lehmer/families.hpp"
#include "lehmer/grow.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lehmer {

/// H2 = (+, -, w), H3 = (0, 0, w), H4 = (+, 0, w); w is the weight-2 label
/// of the ring. Defined for d = -2, -7.
std::vector<LGraph> seed_graphs(const RingSpec& ring);
/// H1 = (+, +, w).
LGraph seed_h1(const RingSpec& ring);

enum class SearchMode { pruned, full };
std::string to_string(SearchMode m);
SearchMode search_mode_from_string(const std::string& s);

/// One addition rule of a round: columns from the pool with the charges.
struct GrowthStep {
    std::string pool_name;          ///< "L'", "L1+0" or "L2+0"
    std::vector<QuadInt> pool;
    std::optional<std::int64_t> bound;
    std::vector<std::int64_t> charges;
    bool mixed = false;  ///< keep only columns with both norm-1 and norm-2 entries
};

struct RoundPlan {
    int n = 0;
    std::vector<GrowthStep> steps;
    GrowthFilterSet filters;
    bool capacity = false;  ///< restrict columns to the remaining weighted-degree room
};

/// Column sets, charges and filters used to build round n.
RoundPlan round_plan(const RingSpec& ring, int n, SearchMode mode);

struct Member {
    std::string key;  ///< canonical key
    LGraph graph;     ///< canonical-form representative
    MahlerResult mahler;
};

struct RoundStats {
    std::size_t additions = 0;
    std::size_t cyclotomic_additions = 0;
    std::map<std::string, std::size_t> pruned;  ///< reason -> count
    std::optional<MahlerResult> min_mahler;     ///< member with the least upper bound
    std::optional<MahlerResult> max_mahler;
    double seconds = 0;
};

struct SearchRound {
    int n = 0;
    std::vector<Member> sigma;  ///< cyclotomic, sorted by key
    std::vector<Member> tau;    ///< minimal noncyclotomic, sorted by key
    RoundStats stats;
};

struct SearchOptions {
    std::int64_t d = -2;
    int n_max = 6;
    SearchMode mode = SearchMode::pruned;
    int jobs = 1;
    std::optional<std::filesystem::path> out;
    bool resume = false;
    mpq_class tol = parse_rational("1e-9");
    std::function<void(const SearchRound&)> on_round;
};

/// Grows the seed set round by round to n_max. With an output directory
/// every finished round is written atomically, and resume continues after
/// the last complete round.
std::vector<SearchRound> run_small_search(const SearchOptions& opt);

/// One round from the previous cyclotomic set; exposed for tests.
SearchRound grow_round(const RingSpec& ring, const std::vector<Member>& prev, int n, SearchMode mode, int jobs,
                       const mpq_class& tol);

/// Record stream: "searchrecords 1" header then one JSON object per line.
std::string round_records(const SearchRound& r, std::int64_t d, SearchMode mode);
SearchRound parse_round_records(const std::string& text);

/// Summary table, one line per round, in text and JSON.
std::string summary_text(const std::vector<SearchRound>& rounds, std::int64_t d, SearchMode mode);
std::string summary_json(const std::vector<SearchRound>& rounds, std::int64_t d, SearchMode mode);

// ----------------------------------------------------------- supersporadic

struct SupersporadicResult {
    std::int64_t d = -2;
    Family base = Family::S14;
    int k = 0;
    std::size_t subsets = 0;
    std::size_t connected_classes = 0;
    std::size_t disconnected_singleton = 0;  ///< disconnected classes with a singleton component
    std::size_t disconnected_pruned = 0;     ///< other disconnected classes
    std::size_t additions = 0;
    std::size_t noncyclotomic = 0;
    std::size_t pruned_x4b = 0;  ///< additions to non-singleton disconnected classes that induce X4B
    std::size_t unpruned_disconnected = 0;  ///< additions to those classes without X4B
    std::vector<LGraph> finds;   ///< minimal noncyclotomic supergraphs with a weight-2 edge
    double seconds = 0;
};

SupersporadicResult run_supersporadic(std::int64_t d, Family base, int k, int jobs = 1);
std::string supersporadic_json(const std::vector<SupersporadicResult>& results);

// ------------------------------------------------------------------ bounds

struct BoundCheck {
    std::string name;         ///< "diagonal>=3", "offdiag-norm>=5", ...
    std::string family;       ///< description of the enumerated matrices
    mpq_class threshold;      ///< stated lower bound
    std::size_t count = 0;    ///< matrices enumerated
    std::size_t qualifying = 0;
    std::optional<MahlerResult> minimum;  ///< least certified enclosure
    std::optional<LGraph> witness;
    bool applicable = true;   ///< false when the ring has no entries of the needed norm
    bool pass = false;        ///< minimum lower bound >= threshold (vacuous when not applicable)
    bool straddles = false;   ///< enclosure contains the threshold
};

std::vector<BoundCheck> verify_bounds(std::int64_t d, const mpq_class& tol = parse_rational("1e-9"));

// ------------------------------------------------------------ certificates

enum class Provenance { computed, cited, structural };
std::string to_string(Provenance p);

struct CertificateCase {
    std::string description;
    std::string fact;
    Provenance provenance = Provenance::computed;
    bool discharged = false;
};

struct Certificate {
    std::int64_t d = 0;
    std::vector<CertificateCase> cases;
    std::vector<std::string> notes;
    std::string verdict;  ///< "proved" or "incomplete"
};

struct CertificateInputs {
    std::optional<std::filesystem::path> search_dir;         ///< run_small_search output, d = -2, -7
    std::optional<std::filesystem::path> supersporadic_file; ///< supersporadic_json output, d = -2, -7
    mpq_class tol = parse_rational("1e-9");
};

Certificate emit_certificate(std::int64_t d, const CertificateInputs& in);
/// "certificate 1" header then the structured text body.
std::string certificate_text(const Certificate& c);

}  // namespace lehmer
