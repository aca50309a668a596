#include "homlab/sampler.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace homlab {

PerfectMatching random_matching(std::size_t n, RandomStream& stream) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("random_matching: n must be even and positive");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  stream.shuffle(order);
  std::vector<std::uint32_t> partner(n);
  for (std::size_t i = 0; i < n; i += 2) {
    partner[order[i]] = order[i + 1];
    partner[order[i + 1]] = order[i];
  }
  return PerfectMatching(std::move(partner));
}

MatchingTriple random_triple(std::size_t n, RandomStream& stream) {
  auto m1 = random_matching(n, stream);
  auto m2 = random_matching(n, stream);
  auto m3 = random_matching(n, stream);
  return MatchingTriple(std::move(m1), std::move(m2), std::move(m3));
}

MatchingTriple sample_min_girth(const SamplerConfig& cfg, RandomStream& stream) {
  if (cfg.min_girth && *cfg.min_girth < 2)
    throw std::invalid_argument("sample_min_girth: min_girth must be >= 2");
  for (std::uint64_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    MatchingTriple t = random_triple(cfg.n, stream);
    if (!cfg.min_girth) return t;
    auto g = girth(union_of_matchings(t));
    if (!g || *g >= *cfg.min_girth) return t;
  }
  std::ostringstream msg;
  msg << "sample_min_girth: no triple with girth >= " << cfg.min_girth.value_or(2)
      << " within " << cfg.max_attempts
      << " attempts (acceptance estimate < " << 1.0 / static_cast<double>(cfg.max_attempts)
      << ")";
  throw std::runtime_error(msg.str());
}

std::string emit_triple(const MatchingTriple& t) {
  std::ostringstream out;
  for (const auto& m : t.matchings) {
    bool first = true;
    for (const Edge& e : m.pairs()) {
      if (!first) out << ' ';
      out << e.u << '-' << e.v;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

MatchingTriple parse_triple(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<PerfectMatching> ms;
  std::string line;
  while (ms.size() < 3 && std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<Edge> pairs;
    std::string token;
    while (ls >> token) {
      auto dash = token.find('-');
      if (dash == std::string::npos)
        throw std::invalid_argument("triple: pair token missing '-': " + token);
      long long u = 0, v = 0;
      try {
        u = std::stoll(token.substr(0, dash));
        v = std::stoll(token.substr(dash + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("triple: bad pair token: " + token);
      }
      if (u < 0 || v < 0) throw std::invalid_argument("triple: negative vertex in " + token);
      pairs.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
    }
    ms.push_back(PerfectMatching::from_pairs(pairs.size() * 2, pairs));
  }
  if (ms.size() != 3) throw std::invalid_argument("triple: expected three matching lines");
  return MatchingTriple(std::move(ms[0]), std::move(ms[1]), std::move(ms[2]));
}

}  // namespace homlab
