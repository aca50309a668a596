#ifndef HOMLAB_SAMPLER_HPP
#define HOMLAB_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "homlab/graph.hpp"
#include "homlab/rng.hpp"

namespace homlab {

struct SamplerConfig {
  std::size_t n = 0;                      // even, >= 2
  std::uint64_t seed = 0;
  std::optional<int> min_girth;           // >= 2 when present
  std::uint64_t max_attempts = 1'000'000; // rejection cap for girth conditioning
};

/// Uniform perfect matching on n vertices: shuffle and pair consecutive
/// positions. Every one of the (n-1)!! matchings is equally likely.
PerfectMatching random_matching(std::size_t n, RandomStream& stream);

/// Three independent uniform matchings.
MatchingTriple random_triple(std::size_t n, RandomStream& stream);

/// Rejection-samples triples until the union girth is >= cfg.min_girth
/// (no conditioning when min_girth is absent). Throws std::runtime_error with
/// the cap and acceptance estimate when the attempt cap is exhausted.
MatchingTriple sample_min_girth(const SamplerConfig& cfg, RandomStream& stream);

/// Three-line matching format: each line lists n/2 pairs "u-v" separated by
/// spaces.
std::string emit_triple(const MatchingTriple& t);
MatchingTriple parse_triple(std::string_view text);

}  // namespace homlab

#endif  // HOMLAB_SAMPLER_HPP
