#include "homlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace homlab {

namespace {

Edge normalized(std::uint32_t u, std::uint32_t v) {
  return u <= v ? Edge{u, v} : Edge{v, u};
}

}  // namespace

MultiGraph::MultiGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  adjacency_.resize(vertex_count_);
  for (auto& e : edges_) {
    if (e.u >= vertex_count_ || e.v >= vertex_count_)
      throw std::invalid_argument("edge endpoint out of range");
    e = normalized(e.u, e.v);
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);  // a loop pushes v twice, degree += 2
  }
}

std::vector<std::vector<std::uint32_t>> MultiGraph::simple_adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(vertex_count_);
  for (const auto& e : edges_) {
    if (e.u == e.v) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

std::vector<Edge> MultiGraph::unique_edges() const {
  std::vector<Edge> out = edges_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool MultiGraph::has_loop() const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.u == e.v; });
}

bool MultiGraph::has_parallel_edge() const {
  std::vector<Edge> sorted = edges_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

MultiGraph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw std::invalid_argument("edge list: missing header \"n m\"");
  if (n < 0 || m < 0) throw std::invalid_argument("edge list: negative count in header");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    if (!(in >> u >> v))
      throw std::invalid_argument("edge list: malformed edge line " + std::to_string(i + 1));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("edge list: vertex index out of range on line " +
                                  std::to_string(i + 1));
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  std::string trailing;
  if (in >> trailing)
    throw std::invalid_argument("edge list: trailing content after " + std::to_string(m) +
                                " edges");
  return MultiGraph(static_cast<std::size_t>(n), std::move(edges));
}

std::string emit_edge_list(const MultiGraph& g) {
  std::vector<Edge> sorted = g.edges();
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream out;
  out << g.vertex_count() << ' ' << sorted.size() << '\n';
  for (const Edge& e : sorted) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

std::optional<int> girth(const MultiGraph& g) {
  if (g.has_loop()) return 1;
  if (g.has_parallel_edge()) return 2;

  // Simple graph now: shortest cycle through each edge (u,v) is
  // 1 + dist(u,v) in the graph with that edge removed.
  const auto adj = g.simple_adjacency();
  const auto edges = g.unique_edges();
  const std::size_t n = g.vertex_count();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(n);
  for (const Edge& e : edges) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[e.u] = 0;
    std::deque<std::uint32_t> queue{e.u};
    while (!queue.empty()) {
      std::uint32_t x = queue.front();
      queue.pop_front();
      if (dist[x] + 1 >= best) break;
      for (std::uint32_t y : adj[x]) {
        if (x == e.u && y == e.v) continue;  // skip the removed edge once
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
      }
    }
    if (dist[e.v] >= 0) best = std::min(best, dist[e.v] + 1);
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

bool is_simple(const MultiGraph& g) {
  return !g.has_loop() && !g.has_parallel_edge();
}

bool is_bipartite(const MultiGraph& g) {
  if (g.has_loop()) return false;
  const auto adj = g.simple_adjacency();
  const std::size_t n = g.vertex_count();
  std::vector<int> side(n, -1);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::deque<std::uint32_t> queue{s};
    while (!queue.empty()) {
      std::uint32_t x = queue.front();
      queue.pop_front();
      for (std::uint32_t y : adj[x]) {
        if (side[y] < 0) {
          side[y] = 1 - side[x];
          queue.push_back(y);
        } else if (side[y] == side[x]) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

struct MisSolver {
  std::vector<std::uint64_t> nbr;  // closed out-neighborhoods as bitmasks
  int best = 0;

  void search(std::uint64_t avail, int current) {
    // take isolated and degree-1 vertices outright; both are always optimal
    for (;;) {
      bool reduced = false;
      for (std::uint64_t rest = avail; rest;) {
        int v = std::countr_zero(rest);
        rest &= rest - 1;
        std::uint64_t deg_mask = nbr[v] & avail;
        int deg = std::popcount(deg_mask);
        if (deg == 0) {
          avail &= ~(std::uint64_t{1} << v);
          ++current;
          reduced = true;
        } else if (deg == 1) {
          avail &= ~((std::uint64_t{1} << v) | deg_mask);
          ++current;
          reduced = true;
        }
      }
      if (!reduced) break;
    }
    if (current + std::popcount(avail) <= best) return;
    if (avail == 0) {
      best = std::max(best, current);
      return;
    }
    // branch on a maximum-degree vertex
    int pick = -1, pick_deg = -1;
    for (std::uint64_t rest = avail; rest;) {
      int v = std::countr_zero(rest);
      rest &= rest - 1;
      int deg = std::popcount(nbr[v] & avail);
      if (deg > pick_deg) {
        pick_deg = deg;
        pick = v;
      }
    }
    std::uint64_t bit = std::uint64_t{1} << pick;
    search(avail & ~(nbr[pick] | bit), current + 1);  // include pick
    search(avail & ~bit, current);                    // exclude pick
  }
};

}  // namespace

int max_independent_set_size(const MultiGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 40) throw std::invalid_argument("max_independent_set_size: instance over size budget (n > 40)");
  if (n == 0) return 0;

  MisSolver solver;
  solver.nbr.assign(n, 0);
  std::uint64_t avail = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (const Edge& e : g.unique_edges()) {
    if (e.u == e.v) {
      avail &= ~(std::uint64_t{1} << e.u);  // looped vertex is never independent
      continue;
    }
    solver.nbr[e.u] |= std::uint64_t{1} << e.v;
    solver.nbr[e.v] |= std::uint64_t{1} << e.u;
  }
  solver.search(avail, 0);
  return solver.best;
}

PerfectMatching::PerfectMatching(std::vector<std::uint32_t> partner)
    : partner_(std::move(partner)) {
  const std::size_t n = partner_.size();
  if (n % 2 != 0) throw std::invalid_argument("perfect matching: vertex count must be even");
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t u = partner_[v];
    if (u >= n || u == v || partner_[u] != v)
      throw std::invalid_argument("perfect matching: partner array is not a fixed-point-free involution");
  }
}

PerfectMatching PerfectMatching::from_pairs(std::size_t n, const std::vector<Edge>& pairs) {
  std::vector<std::uint32_t> partner(n, std::numeric_limits<std::uint32_t>::max());
  if (pairs.size() * 2 != n)
    throw std::invalid_argument("perfect matching: wrong number of pairs");
  for (const Edge& e : pairs) {
    if (e.u >= n || e.v >= n || e.u == e.v)
      throw std::invalid_argument("perfect matching: bad pair");
    if (partner[e.u] != std::numeric_limits<std::uint32_t>::max() ||
        partner[e.v] != std::numeric_limits<std::uint32_t>::max())
      throw std::invalid_argument("perfect matching: vertex covered twice");
    partner[e.u] = e.v;
    partner[e.v] = e.u;
  }
  return PerfectMatching(std::move(partner));
}

std::vector<Edge> PerfectMatching::pairs() const {
  std::vector<Edge> out;
  out.reserve(partner_.size() / 2);
  for (std::uint32_t v = 0; v < partner_.size(); ++v)
    if (v < partner_[v]) out.push_back({v, partner_[v]});
  return out;
}

MatchingTriple::MatchingTriple(PerfectMatching m1, PerfectMatching m2, PerfectMatching m3)
    : matchings{std::move(m1), std::move(m2), std::move(m3)} {
  if (matchings[0].vertex_count() != matchings[1].vertex_count() ||
      matchings[0].vertex_count() != matchings[2].vertex_count())
    throw std::invalid_argument("matching triple: vertex counts differ");
}

MultiGraph union_of_matchings(const MatchingTriple& t) {
  std::vector<Edge> edges;
  edges.reserve(3 * t.vertex_count() / 2);
  for (const auto& m : t.matchings) {
    auto p = m.pairs();
    edges.insert(edges.end(), p.begin(), p.end());
  }
  return MultiGraph(t.vertex_count(), std::move(edges));
}

namespace {

void enumerate_matchings(std::vector<std::uint32_t>& remaining, std::vector<Edge>& acc,
                         std::size_t n, std::vector<PerfectMatching>& out) {
  if (remaining.empty()) {
    out.push_back(PerfectMatching::from_pairs(n, acc));
    return;
  }
  std::uint32_t v = remaining.front();
  for (std::size_t i = 1; i < remaining.size(); ++i) {
    std::uint32_t u = remaining[i];
    std::vector<std::uint32_t> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t j = 1; j < remaining.size(); ++j)
      if (j != i) rest.push_back(remaining[j]);
    acc.push_back({v, u});
    enumerate_matchings(rest, acc, n, out);
    acc.pop_back();
  }
}

}  // namespace

std::vector<PerfectMatching> all_perfect_matchings(std::size_t n) {
  if (n % 2 != 0) throw std::invalid_argument("all_perfect_matchings: n must be even");
  std::vector<PerfectMatching> out;
  if (n == 0) {
    out.push_back(PerfectMatching(std::vector<std::uint32_t>{}));
    return out;
  }
  std::vector<std::uint32_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<Edge> acc;
  enumerate_matchings(remaining, acc, n, out);
  return out;
}

CycleTarget::CycleTarget(int k_) : k(k_) {
  if (k < 3) throw std::invalid_argument("cycle target: k must be >= 3");
}

CircularClique::CircularClique(int p_, int q_) : p(p_), q(q_) {
  if (q < 1 || p < 2 * q) throw std::invalid_argument("circular clique: need p >= 2q >= 2");
}

bool CircularClique::adjacent(int x, int y) const {
  int d = std::abs(x - y);
  return q <= d && d <= p - q;
}

MultiGraph CircularClique::to_graph() const {
  std::vector<Edge> edges;
  for (int x = 0; x < p; ++x)
    for (int y = x + 1; y < p; ++y)
      if (adjacent(x, y))
        edges.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)});
  return MultiGraph(static_cast<std::size_t>(p), std::move(edges));
}

MultiGraph make_cycle(int k) {
  if (k < 3) throw std::invalid_argument("make_cycle: k must be >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i < k; ++i)
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + 1) % k)});
  return MultiGraph(static_cast<std::size_t>(k), std::move(edges));
}

MultiGraph make_complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  return MultiGraph(static_cast<std::size_t>(n), std::move(edges));
}

MultiGraph make_petersen() {
  // outer 5-cycle 0..4, inner 5-cycle 5..9 with step 2, spokes i -- i+5
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5});
    edges.push_back({5 + i, 5 + (i + 2) % 5});
    edges.push_back({i, i + 5});
  }
  return MultiGraph(10, std::move(edges));
}

}  // namespace homlab
