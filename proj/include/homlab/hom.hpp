#ifndef HOMLAB_HOM_HPP
#define HOMLAB_HOM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "homlab/graph.hpp"

namespace homlab {

using BigInt = boost::multiprecision::cpp_int;

/// A homomorphism target: a cycle C_k or a circular clique K_{p/q}.
/// Both are loopless; target order is capped at 64 vertices so candidate
/// sets fit in one machine word.
using HomTarget = std::variant<CycleTarget, CircularClique>;

int target_size(const HomTarget& t);
bool target_adjacent(const HomTarget& t, int x, int y);

/// Assignment of source vertices to target vertices, with the target kept
/// alongside. Valid iff every source edge lands on a target edge.
struct HomMap {
  HomTarget target;
  std::vector<int> labels;
};

/// Backtracking search with per-vertex candidate sets and arc-consistency
/// propagation. Deterministic: vertices are ordered by descending degree and
/// BFS order within components, labels tried in ascending order. A source
/// loop makes the instance structurally impossible (returns nullopt).
std::optional<HomMap> find_homomorphism(const MultiGraph& g, const HomTarget& target);

/// True iff every edge of g maps to a target edge. Throws when the label
/// array length does not match the vertex count.
bool verify_homomorphism(const MultiGraph& g, const HomMap& m);

/// Tightness for cycle targets: every vertex v with label != 0 has a
/// neighbor labeled label(v)+1 (mod k). Throws when m is not a valid
/// homomorphism into a cycle.
bool is_tight(const MultiGraph& g, const HomMap& m);

struct TightenStep {
  std::uint32_t vertex;
  int from;
  int to;
};

struct TightenResult {
  HomMap map;
  std::vector<TightenStep> steps;
};

/// Repairs a homomorphism into an odd cycle C_{2k+1} into a tight one:
/// while some vertex v has label != 0 and no neighbor labeled label+1, the
/// lowest-index such vertex gets its label decreased by 2 (mod 2k+1).
/// Isolated vertices are first reset to label 0. Terminates in < 2kn steps;
/// every intermediate map is a homomorphism and labels that reach 0 never
/// change again.
TightenResult tighten_trace(const MultiGraph& g, const HomMap& m);
HomMap tighten(const MultiGraph& g, const HomMap& m);

/// Exact count of (tight) homomorphisms into C_k by exhaustive enumeration.
/// Budget: k^vertex_count <= 1e8.
BigInt count_homomorphisms(const MultiGraph& g, const CycleTarget& target, bool tight_only);

/// Per-matching boundary counts for a homomorphism of the union into C_7:
/// m[i] = number of edges of that matching joining class i-1 to class i.
/// The three arrays always agree, and each equals
/// n/2 - (n_{i+1} + n_{i+3} + n_{i+5}) with indices mod 7.
struct CutCounts {
  std::array<std::array<std::int64_t, 7>, 3> per_matching;
};

CutCounts matching_cut_counts(const MatchingTriple& t, const HomMap& m);

struct Fraction {
  long long num = 0;
  long long den = 1;

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Minimum p/q over reduced fractions with q <= q_max and
/// 2 <= p/q <= (greedy chromatic bound) such that g maps into K_{p/q}.
/// Candidates are tested in ascending order of value, so the first success
/// is the minimum; the result is an upper bound on the circular chromatic
/// number and exact when the optimum has denominator <= q_max.
Fraction circular_chromatic_upper(const MultiGraph& g, int q_max);

/// HomMap text format: one line per vertex, "v label".
std::string emit_hom_map(const HomMap& m);
std::vector<int> parse_hom_labels(std::string_view text, std::size_t vertex_count,
                                  int target_size);

}  // namespace homlab

#endif  // HOMLAB_HOM_HPP
