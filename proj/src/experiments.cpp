#include "homlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "homlab/hom.hpp"
#include "homlab/rate.hpp"
#include "homlab/rng.hpp"
#include "homlab/sampler.hpp"

namespace homlab {

namespace {

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::hom_fraction: return "hom-fraction";
    case ExperimentKind::simplicity: return "simplicity";
    case ExperimentKind::mis_trend: return "mis-trend";
  }
  return "?";
}

void validate(const ExperimentSpec& spec) {
  if (spec.samples < 1) throw std::invalid_argument("experiment: samples must be >= 1");
  if (spec.n_values.empty()) throw std::invalid_argument("experiment: no n values");
  for (int n : spec.n_values)
    if (n <= 0 || n % 2 != 0) throw std::invalid_argument("experiment: n values must be even and positive");
  if (spec.kind == ExperimentKind::hom_fraction && spec.cycle_k < 3)
    throw std::invalid_argument("experiment: target cycle k must be >= 3");
  if (spec.kind == ExperimentKind::mis_trend)
    for (int n : spec.n_values)
      if (n > 40) throw std::invalid_argument("experiment: mis-trend budget n <= 40 exceeded");
}

std::optional<std::uint64_t> triple_count_if_small(int n) {
  // ((n-1)!!)^3 when within the exhaustive budget; stop multiplying as soon
  // as the cube cannot fit the budget so large n never overflows
  std::uint64_t dfact = 1;
  for (int v = n - 1; v > 1 && dfact <= 100; v -= 2) dfact *= static_cast<std::uint64_t>(v);
  const std::uint64_t cube = dfact * dfact * dfact;
  if (dfact > 100 || cube > kExhaustiveTripleBudget) return std::nullopt;
  return cube;
}

bool union_maps_to_cycle(const MultiGraph& u, int k) {
  if (k % 2 == 0) return is_bipartite(u);
  return find_homomorphism(u, CycleTarget(k)).has_value();
}

struct SampleOutcome {
  bool success = false;
  std::uint64_t mis = 0;
};

/// Per-sample streams derive from (seed, row_index << 32 | sample); success
/// counts and MIS sums are integers, so aggregation is order-independent and
/// results match for every worker count.
ExperimentRow run_point(const ExperimentSpec& spec, std::size_t row_index, int n,
                        const std::function<SampleOutcome(const MultiGraph&)>& probe) {
  ExperimentRow row;
  row.kind = kind_name(spec.kind);
  row.n = n;
  row.k = spec.kind == ExperimentKind::hom_fraction ? spec.cycle_k : 0;
  row.seed = spec.seed;

  std::uint64_t successes = 0;
  std::uint64_t mis_sum = 0;
  std::uint64_t samples = 0;

  if (auto exhaustive_total = triple_count_if_small(n)) {
    row.exhaustive = true;
    samples = *exhaustive_total;
    const auto matchings = all_perfect_matchings(static_cast<std::size_t>(n));
    for (const auto& m1 : matchings)
      for (const auto& m2 : matchings)
        for (const auto& m3 : matchings) {
          const SampleOutcome out = probe(union_of_matchings(MatchingTriple(m1, m2, m3)));
          successes += out.success ? 1 : 0;
          mis_sum += out.mis;
        }
  } else {
    samples = static_cast<std::uint64_t>(spec.samples);
    const int workers = rate::resolve_workers(spec.workers);
    const std::size_t chunks =
        std::min<std::size_t>(static_cast<std::size_t>(workers), samples);
    std::vector<std::uint64_t> chunk_successes(chunks, 0);
    std::vector<std::uint64_t> chunk_mis(chunks, 0);
    auto run_chunk = [&](std::size_t c) {
      const std::uint64_t begin = samples * c / chunks;
      const std::uint64_t end = samples * (c + 1) / chunks;
      for (std::uint64_t s = begin; s < end; ++s) {
        RandomStream stream = RandomStream::derived(
            spec.seed, (static_cast<std::uint64_t>(row_index) << 32) | s);
        const SampleOutcome out =
            probe(union_of_matchings(random_triple(static_cast<std::size_t>(n), stream)));
        chunk_successes[c] += out.success ? 1 : 0;
        chunk_mis[c] += out.mis;
      }
    };
    if (chunks <= 1) {
      run_chunk(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(chunks);
      for (std::size_t c = 0; c < chunks; ++c) threads.emplace_back(run_chunk, c);
      for (auto& t : threads) t.join();
    }
    for (std::size_t c = 0; c < chunks; ++c) {
      successes += chunk_successes[c];
      mis_sum += chunk_mis[c];
    }
  }

  row.samples = samples;
  row.successes = successes;
  row.fraction = static_cast<double>(successes) / static_cast<double>(samples);
  row.standard_error =
      std::sqrt(row.fraction * (1.0 - row.fraction) / static_cast<double>(samples));
  if (spec.kind == ExperimentKind::mis_trend)
    row.mean_ratio = static_cast<double>(mis_sum) /
                     (static_cast<double>(samples) * static_cast<double>(n));
  return row;
}

std::vector<ExperimentRow> run(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<ExperimentRow> rows;
  rows.reserve(spec.n_values.size());
  for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
    const int n = spec.n_values[i];
    std::function<SampleOutcome(const MultiGraph&)> probe;
    switch (spec.kind) {
      case ExperimentKind::hom_fraction:
        probe = [&](const MultiGraph& u) {
          return SampleOutcome{union_maps_to_cycle(u, spec.cycle_k), 0};
        };
        break;
      case ExperimentKind::simplicity:
        probe = [](const MultiGraph& u) { return SampleOutcome{is_simple(u), 0}; };
        break;
      case ExperimentKind::mis_trend:
        probe = [n](const MultiGraph& u) {
          const auto mis = static_cast<std::uint64_t>(max_independent_set_size(u));
          return SampleOutcome{static_cast<double>(mis) < rate::kIndependenceBound * n, mis};
        };
        break;
    }
    rows.push_back(run_point(spec, i, n, probe));
  }
  return rows;
}

}  // namespace

std::vector<ExperimentRow> run_hom_fraction(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.kind = ExperimentKind::hom_fraction;
  return run(s);
}

std::vector<ExperimentRow> run_simplicity(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.kind = ExperimentKind::simplicity;
  return run(s);
}

std::vector<ExperimentRow> run_mis_trend(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  s.kind = ExperimentKind::mis_trend;
  return run(s);
}

ExperimentRow mis_diagnostic(const MultiGraph& g) {
  ExperimentRow row;
  row.kind = "mis-trend";
  row.n = static_cast<int>(g.vertex_count());
  row.samples = 1;
  const int mis = max_independent_set_size(g);
  row.successes = static_cast<double>(mis) < rate::kIndependenceBound * row.n ? 1 : 0;
  row.fraction = static_cast<double>(row.successes);
  row.standard_error = 0.0;
  row.mean_ratio = row.n > 0 ? static_cast<double>(mis) / row.n : 0.0;
  row.exhaustive = true;
  return row;
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "kind,n,k,samples,successes,fraction,stderr,seed\n";
  char buffer[64];
  for (const ExperimentRow& row : rows) {
    out << row.kind << ',' << row.n << ',' << row.k << ',' << row.samples << ','
        << row.successes << ',';
    std::snprintf(buffer, sizeof buffer, "%.9g", row.fraction);
    out << buffer << ',';
    std::snprintf(buffer, sizeof buffer, "%.9g", row.standard_error);
    out << buffer << ',' << row.seed << '\n';
  }
  return out.str();
}

}  // namespace homlab
