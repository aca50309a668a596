#include "homlab/hom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace homlab {

int target_size(const HomTarget& t) {
  return std::visit([](const auto& x) {
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, CycleTarget>)
      return x.k;
    else
      return x.p;
  }, t);
}

bool target_adjacent(const HomTarget& t, int x, int y) {
  return std::visit([&](const auto& tt) {
    if constexpr (std::is_same_v<std::decay_t<decltype(tt)>, CycleTarget>) {
      int d = (x - y) % tt.k;
      if (d < 0) d += tt.k;
      return d == 1 || d == tt.k - 1;
    } else {
      return tt.adjacent(x, y);
    }
  }, t);
}

namespace {

constexpr int kMaxTargetOrder = 64;
constexpr std::uint64_t kSearchNodeBudget = 100'000'000;

std::vector<std::uint64_t> adjacency_masks(const HomTarget& t) {
  const int k = target_size(t);
  if (k > kMaxTargetOrder)
    throw std::invalid_argument("homomorphism target order exceeds 64");
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(k), 0);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (target_adjacent(t, x, y)) mask[x] |= std::uint64_t{1} << y;
  return mask;
}

/// Deterministic variable order: components in discovery order, BFS within a
/// component from its maximum-degree vertex, neighbors by descending degree.
std::vector<std::uint32_t> search_order(const MultiGraph& g,
                                        const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    // find the component and its max-degree root
    std::vector<std::uint32_t> comp{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::uint32_t y : adj[comp[i]])
        if (!seen[y]) {
          seen[y] = 1;
          comp.push_back(y);
        }
    std::uint32_t root = comp[0];
    for (std::uint32_t v : comp)
      if (adj[v].size() > adj[root].size() || (adj[v].size() == adj[root].size() && v < root))
        root = v;
    std::vector<char> queued(n, 0);
    std::deque<std::uint32_t> queue{root};
    queued[root] = 1;
    while (!queue.empty()) {
      std::uint32_t x = queue.front();
      queue.pop_front();
      order.push_back(x);
      std::vector<std::uint32_t> nbrs(adj[x].begin(), adj[x].end());
      std::sort(nbrs.begin(), nbrs.end(), [&](std::uint32_t a, std::uint32_t b) {
        return adj[a].size() != adj[b].size() ? adj[a].size() > adj[b].size() : a < b;
      });
      for (std::uint32_t y : nbrs)
        if (!queued[y]) {
          queued[y] = 1;
          queue.push_back(y);
        }
    }
  }
  return order;
}

struct HomSearch {
  const std::vector<std::vector<std::uint32_t>>& adj;
  const std::vector<std::uint64_t>& target_mask;
  std::vector<std::uint64_t> cand;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> trail;
  std::uint64_t nodes = 0;

  std::uint64_t revise(std::uint64_t cand_u, std::uint64_t cand_w) const {
    std::uint64_t keep = 0;
    for (std::uint64_t rest = cand_u; rest;) {
      int label = std::countr_zero(rest);
      rest &= rest - 1;
      if (target_mask[label] & cand_w) keep |= std::uint64_t{1} << label;
    }
    return keep;
  }

  bool propagate(std::uint32_t start) {
    std::deque<std::uint32_t> queue{start};
    while (!queue.empty()) {
      std::uint32_t w = queue.front();
      queue.pop_front();
      for (std::uint32_t u : adj[w]) {
        std::uint64_t next = revise(cand[u], cand[w]);
        if (next == cand[u]) continue;
        if (next == 0) return false;
        trail.emplace_back(u, cand[u]);
        cand[u] = next;
        queue.push_back(u);
      }
    }
    return true;
  }

  void unwind(std::size_t mark) {
    while (trail.size() > mark) {
      auto [v, mask] = trail.back();
      trail.pop_back();
      cand[v] = mask;
    }
  }

  bool dfs(const std::vector<std::uint32_t>& order, std::size_t pos) {
    if (pos == order.size()) return true;
    std::uint32_t v = order[pos];
    std::uint64_t options = cand[v];
    for (std::uint64_t rest = options; rest;) {
      int label = std::countr_zero(rest);
      rest &= rest - 1;
      if (++nodes > kSearchNodeBudget)
        throw std::runtime_error("homomorphism search budget exceeded");
      std::size_t mark = trail.size();
      trail.emplace_back(v, cand[v]);
      cand[v] = std::uint64_t{1} << label;
      if (propagate(v) && dfs(order, pos + 1)) return true;
      unwind(mark);
    }
    return false;
  }
};

}  // namespace

std::optional<HomMap> find_homomorphism(const MultiGraph& g, const HomTarget& target) {
  if (g.has_loop()) return std::nullopt;  // loopless targets: structurally impossible
  const int k = target_size(target);
  const auto mask = adjacency_masks(target);
  const auto adj = g.simple_adjacency();
  const std::size_t n = g.vertex_count();

  HomSearch search{adj, mask, {}, {}, 0};
  const std::uint64_t full =
      k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  search.cand.assign(n, full);
  auto order = search_order(g, adj);
  if (!search.dfs(order, 0)) return std::nullopt;

  HomMap result{target, std::vector<int>(n, 0)};
  for (std::size_t v = 0; v < n; ++v)
    result.labels[v] = std::countr_zero(search.cand[v]);
  return result;
}

bool verify_homomorphism(const MultiGraph& g, const HomMap& m) {
  if (m.labels.size() != g.vertex_count())
    throw std::invalid_argument("verify_homomorphism: label array length mismatch");
  const int k = target_size(m.target);
  for (int label : m.labels)
    if (label < 0 || label >= k) return false;
  for (const Edge& e : g.unique_edges())
    if (!target_adjacent(m.target, m.labels[e.u], m.labels[e.v])) return false;
  return true;
}

bool is_tight(const MultiGraph& g, const HomMap& m) {
  const auto* cycle = std::get_if<CycleTarget>(&m.target);
  if (!cycle) throw std::invalid_argument("is_tight: cycle target required");
  if (!verify_homomorphism(g, m))
    throw std::invalid_argument("is_tight: map is not a valid homomorphism");
  const int k = cycle->k;
  const auto adj = g.simple_adjacency();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (m.labels[v] == 0) continue;
    const int successor = (m.labels[v] + 1) % k;
    bool found = false;
    for (std::uint32_t u : adj[v])
      if (m.labels[u] == successor) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

TightenResult tighten_trace(const MultiGraph& g, const HomMap& m) {
  const auto* cycle = std::get_if<CycleTarget>(&m.target);
  if (!cycle) throw std::invalid_argument("tighten: cycle target required");
  if (cycle->k % 2 == 0) throw std::invalid_argument("tighten: odd cycle target required");
  if (!verify_homomorphism(g, m))
    throw std::invalid_argument("tighten: map is not a valid homomorphism");

  const int k = cycle->k;
  const std::size_t n = g.vertex_count();
  const auto adj = g.simple_adjacency();
  TightenResult result{m, {}};
  auto& labels = result.map.labels;
  for (std::size_t v = 0; v < n; ++v)
    if (adj[v].empty()) labels[v] = 0;

  const std::uint64_t step_cap = static_cast<std::uint64_t>(k - 1) * std::max<std::size_t>(n, 1);
  for (;;) {
    std::int64_t violator = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (labels[v] == 0) continue;
      const int successor = (labels[v] + 1) % k;
      bool ok = false;
      for (std::uint32_t u : adj[v])
        if (labels[u] == successor) {
          ok = true;
          break;
        }
      if (!ok) {
        violator = static_cast<std::int64_t>(v);
        break;
      }
    }
    if (violator < 0) break;
    const auto v = static_cast<std::uint32_t>(violator);
    const int from = labels[v];
    const int to = (from + k - 2) % k;
    labels[v] = to;
    for (std::uint32_t u : adj[v])
      if (!target_adjacent(result.map.target, to, labels[u]))
        throw std::logic_error("tighten: step broke the homomorphism");
    result.steps.push_back({v, from, to});
    if (result.steps.size() >= step_cap)
      throw std::logic_error("tighten: step bound 2kn exceeded");
  }
  return result;
}

HomMap tighten(const MultiGraph& g, const HomMap& m) { return tighten_trace(g, m).map; }

BigInt count_homomorphisms(const MultiGraph& g, const CycleTarget& target, bool tight_only) {
  const std::size_t n = g.vertex_count();
  const int k = target.k;
  if (static_cast<double>(n) * std::log(static_cast<double>(k)) >
      std::log(1e8) + 1e-9)
    throw std::invalid_argument("count_homomorphisms: enumeration budget k^n <= 1e8 exceeded");
  if (g.has_loop()) return 0;

  const auto adj = g.simple_adjacency();
  std::vector<std::vector<std::uint32_t>> earlier(n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::uint32_t u : adj[v])
      if (u < v) earlier[v].push_back(u);

  std::uint64_t count = 0;
  std::vector<int> labels(n, 0);
  auto leaf_is_tight = [&]() {
    for (std::size_t v = 0; v < n; ++v) {
      if (labels[v] == 0) continue;
      const int successor = (labels[v] + 1) % k;
      bool ok = false;
      for (std::uint32_t u : adj[v])
        if (labels[u] == successor) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  };
  auto consistent = [&](std::size_t v) {
    for (std::uint32_t u : earlier[v]) {
      int d = (labels[v] - labels[u]) % k;
      if (d < 0) d += k;
      if (d != 1 && d != k - 1) return false;
    }
    return true;
  };

  // depth-first over vertices 0..n-1; prune as soon as a prefix violates an edge.
  // Pruned branches contain no valid maps, so the count equals full enumeration.
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == n) {
      if (!tight_only || leaf_is_tight()) ++count;
      return;
    }
    for (int c = 0; c < k; ++c) {
      labels[v] = c;
      if (consistent(v)) self(self, v + 1);
    }
  };
  rec(rec, 0);
  return BigInt(count);
}

CutCounts matching_cut_counts(const MatchingTriple& t, const HomMap& m) {
  const auto* cycle = std::get_if<CycleTarget>(&m.target);
  if (!cycle || cycle->k != 7)
    throw std::invalid_argument("matching_cut_counts: C_7 target required");
  const MultiGraph u = union_of_matchings(t);
  if (!verify_homomorphism(u, m))
    throw std::invalid_argument("matching_cut_counts: map is not a valid homomorphism of the union");

  CutCounts out{};
  std::array<std::int64_t, 7> class_sizes{};
  for (int label : m.labels) ++class_sizes[static_cast<std::size_t>(label)];
  for (int mi = 0; mi < 3; ++mi) {
    auto& cuts = out.per_matching[static_cast<std::size_t>(mi)];
    cuts.fill(0);
    for (const Edge& e : t.matchings[static_cast<std::size_t>(mi)].pairs()) {
      const int lu = m.labels[e.u], lv = m.labels[e.v];
      if ((lu + 1) % 7 == lv)
        ++cuts[static_cast<std::size_t>(lv)];
      else
        ++cuts[static_cast<std::size_t>(lu)];
    }
  }
  // the three arrays agree and match n/2 - (n_{i+1}+n_{i+3}+n_{i+5})
  const auto n_half = static_cast<std::int64_t>(t.vertex_count() / 2);
  for (int i = 0; i < 7; ++i) {
    const std::int64_t expected =
        n_half - (class_sizes[(i + 1) % 7] + class_sizes[(i + 3) % 7] + class_sizes[(i + 5) % 7]);
    for (int mi = 0; mi < 3; ++mi)
      if (out.per_matching[static_cast<std::size_t>(mi)][static_cast<std::size_t>(i)] != expected)
        throw std::logic_error("matching_cut_counts: cut-count identity violated");
  }
  return out;
}

namespace {

int greedy_chromatic_bound(const MultiGraph& g) {
  const auto adj = g.simple_adjacency();
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return adj[a].size() != adj[b].size() ? adj[a].size() > adj[b].size() : a < b;
  });
  std::vector<int> color(n, -1);
  int used = 0;
  for (std::uint32_t v : order) {
    std::uint64_t taken = 0;
    for (std::uint32_t u : adj[v])
      if (color[u] >= 0) taken |= std::uint64_t{1} << color[u];
    int c = std::countr_one(taken);
    color[v] = c;
    used = std::max(used, c + 1);
  }
  return used;
}

}  // namespace

Fraction circular_chromatic_upper(const MultiGraph& g, int q_max) {
  if (g.has_loop()) throw std::invalid_argument("circular_chromatic_upper: graph must be loopless");
  if (q_max < 1) throw std::invalid_argument("circular_chromatic_upper: q_max must be >= 1");
  if (g.edge_count() == 0) return {2, 1};

  const int guess = std::max(greedy_chromatic_bound(g), 2);
  std::vector<Fraction> candidates;
  for (int q = 1; q <= q_max; ++q)
    for (int p = 2 * q; p <= guess * q; ++p)
      if (std::gcd(p, q) == 1) candidates.push_back({p, q});
  std::sort(candidates.begin(), candidates.end(), [](const Fraction& x, const Fraction& y) {
    return x.num * y.den < y.num * x.den;
  });
  for (const Fraction& f : candidates) {
    if (f.num > kMaxTargetOrder)
      throw std::runtime_error("circular_chromatic_upper: search budget exceeded (target order > 64)");
    if (find_homomorphism(g, CircularClique(static_cast<int>(f.num), static_cast<int>(f.den))))
      return f;
  }
  throw std::logic_error("circular_chromatic_upper: greedy-coloring fallback candidate failed");
}

std::string emit_hom_map(const HomMap& m) {
  std::ostringstream out;
  for (std::size_t v = 0; v < m.labels.size(); ++v) out << v << ' ' << m.labels[v] << '\n';
  return out.str();
}

std::vector<int> parse_hom_labels(std::string_view text, std::size_t vertex_count,
                                  int target_order) {
  std::istringstream in{std::string(text)};
  std::vector<int> labels(vertex_count, -1);
  long long v = 0, label = 0;
  while (in >> v >> label) {
    if (v < 0 || static_cast<std::size_t>(v) >= vertex_count)
      throw std::invalid_argument("hom map: vertex index out of range");
    if (label < 0 || label >= target_order)
      throw std::invalid_argument("hom map: label out of target range");
    if (labels[static_cast<std::size_t>(v)] != -1)
      throw std::invalid_argument("hom map: duplicate vertex line");
    labels[static_cast<std::size_t>(v)] = static_cast<int>(label);
  }
  if (!in.eof()) throw std::invalid_argument("hom map: malformed line");
  for (std::size_t i = 0; i < vertex_count; ++i)
    if (labels[i] == -1)
      throw std::invalid_argument("hom map: missing label for vertex " + std::to_string(i));
  return labels;
}

}  // namespace homlab
