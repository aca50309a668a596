#ifndef HOMLAB_GRAPH_HPP
#define HOMLAB_GRAPH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace homlab {

/// Unordered vertex pair; normalized so that u <= v.
struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend bool operator<(const Edge& lhs, const Edge& rhs) {
    return lhs.u != rhs.u ? lhs.u < rhs.u : lhs.v < rhs.v;
  }
};

/// Vertex-indexed multigraph. Parallel edges are kept with multiplicity;
/// loops are representable (a loop contributes 2 to its vertex degree).
class MultiGraph {
 public:
  MultiGraph() = default;
  MultiGraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Endpoint count at v, with multiplicity.
  std::size_t degree(std::uint32_t v) const { return adjacency_[v].size(); }

  /// Neighbor lists with multiplicity; a loop at v lists v twice.
  const std::vector<std::vector<std::uint32_t>>& adjacency() const {
    return adjacency_;
  }

  /// Deduplicated, loop-free neighbor lists (ascending).
  std::vector<std::vector<std::uint32_t>> simple_adjacency() const;

  /// Edge multiset deduplicated to distinct pairs (loops kept as (v,v)).
  std::vector<Edge> unique_edges() const;

  bool has_loop() const;
  bool has_parallel_edge() const;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
};

/// Parses the edge-list document format: first line "n m", then m lines
/// "u v". Duplicated lines encode parallel edges. Throws std::invalid_argument
/// on malformed input, out-of-range vertex indices or negative counts.
MultiGraph parse_edge_list(std::string_view text);

/// Inverse of parse_edge_list with edges sorted lexicographically.
std::string emit_edge_list(const MultiGraph& g);

/// Length of a shortest cycle: 1 for a loop, 2 for a parallel pair,
/// std::nullopt for forests.
std::optional<int> girth(const MultiGraph& g);

/// True iff the graph has no loops and no parallel edges.
bool is_simple(const MultiGraph& g);

bool is_bipartite(const MultiGraph& g);

/// Exact maximum independent set cardinality via branch-and-bound with
/// degree reductions. Hard size cap: vertex_count <= 40.
int max_independent_set_size(const MultiGraph& g);

/// Partition of {0..n-1} into n/2 unordered pairs, n even.
class PerfectMatching {
 public:
  /// partner[v] is the vertex matched to v; must be a fixed-point-free
  /// involution.
  explicit PerfectMatching(std::vector<std::uint32_t> partner);

  static PerfectMatching from_pairs(std::size_t n, const std::vector<Edge>& pairs);

  std::size_t vertex_count() const { return partner_.size(); }
  std::uint32_t partner(std::uint32_t v) const { return partner_[v]; }

  /// The n/2 pairs, normalized and sorted.
  std::vector<Edge> pairs() const;

  friend bool operator==(const PerfectMatching&, const PerfectMatching&) = default;

 private:
  std::vector<std::uint32_t> partner_;
};

/// Ordered triple of perfect matchings on a shared vertex set.
struct MatchingTriple {
  MatchingTriple(PerfectMatching m1, PerfectMatching m2, PerfectMatching m3);

  std::size_t vertex_count() const { return matchings[0].vertex_count(); }

  std::array<PerfectMatching, 3> matchings;
};

/// The cubic multigraph M1 ∪ M2 ∪ M3; every vertex ends with degree 3.
MultiGraph union_of_matchings(const MatchingTriple& t);

/// All (n-1)!! perfect matchings on {0..n-1}, in canonical order: the lowest
/// unmatched vertex is paired with each remaining vertex in ascending order.
std::vector<PerfectMatching> all_perfect_matchings(std::size_t n);

/// Cycle C_k on the congruence classes mod k; i adjacent to i+1.
struct CycleTarget {
  explicit CycleTarget(int k);
  int k;
};

/// Circular clique K_{p/q}: vertices 0..p-1, x ~ y iff q <= |x-y| <= p-q.
/// p >= 2q guarantees there are no loops.
struct CircularClique {
  CircularClique(int p, int q);
  int p;
  int q;

  bool adjacent(int x, int y) const;
  MultiGraph to_graph() const;
};

MultiGraph make_cycle(int k);
MultiGraph make_complete(int n);
MultiGraph make_petersen();

}  // namespace homlab

#endif  // HOMLAB_GRAPH_HPP
