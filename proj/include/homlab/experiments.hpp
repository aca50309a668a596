#ifndef HOMLAB_EXPERIMENTS_HPP
#define HOMLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "homlab/graph.hpp"

namespace homlab {

enum class ExperimentKind { hom_fraction, simplicity, mis_trend };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::simplicity;
  std::vector<int> n_values;   // even
  int samples = 1;             // >= 1; ignored when a point runs exhaustively
  int cycle_k = 7;             // hom-fraction target cycle, k >= 3 (even k = bipartite test)
  std::uint64_t seed = 0;
  int workers = 0;
};

struct ExperimentRow {
  std::string kind;
  int n = 0;
  int k = 0;  // 0 when not applicable
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  double fraction = 0.0;
  double standard_error = 0.0;
  std::uint64_t seed = 0;
  bool exhaustive = false;   // not part of the CSV schema
  double mean_ratio = 0.0;   // mis-trend: sample mean of MIS/n
};

/// Fraction of sampled (or exhaustively enumerated) matching triples whose
/// union admits a homomorphism to C_k.
std::vector<ExperimentRow> run_hom_fraction(const ExperimentSpec& spec);

/// Fraction of triples whose union has no loops or parallel edges.
std::vector<ExperimentRow> run_simplicity(const ExperimentSpec& spec);

/// Fraction of triples with exact MIS < 0.4554 n, plus the mean of MIS/n.
std::vector<ExperimentRow> run_mis_trend(const ExperimentSpec& spec);

/// Diagnostic row for a fixed input graph: MIS and the 0.4554 n check on it.
ExperimentRow mis_diagnostic(const MultiGraph& g);

/// Fixed schema: kind,n,k,samples,successes,fraction,stderr,seed.
std::string to_csv(const std::vector<ExperimentRow>& rows);

/// Points with ((n-1)!!)^3 ordered triples at or below this bound are
/// enumerated exactly instead of sampled.
inline constexpr std::uint64_t kExhaustiveTripleBudget = 100'000;

}  // namespace homlab

#endif  // HOMLAB_EXPERIMENTS_HPP
