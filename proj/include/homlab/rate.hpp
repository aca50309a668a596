#ifndef HOMLAB_RATE_HPP
#define HOMLAB_RATE_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace homlab::rate {

/// Independence-number constant: the largest independent set of a random
/// cubic graph is a.s. below 0.4554 n, so every cut fraction y_i = m_i/n is
/// at least 0.5 - 0.4554.
inline constexpr double kIndependenceBound = 0.4554;
inline constexpr double kMinCutFraction = 0.0446;

/// Any feasible midpoint satisfies y_i <= 0.5 - 6*0.0446 = 0.2324; the grid
/// anchors a_i in [0, 0.24], which covers every feasible box.
inline constexpr double kMidpointCap = 0.2324;
inline constexpr double kGridUpperLimit = 0.24;

inline constexpr double kMaxBoxWidth = 0.1;
inline constexpr double kInvE = 0.36787944117144233;

/// Inclusive tolerance for feasibility comparisons: boxes on a constraint
/// boundary are kept, never dropped, so the sweep stays a covering.
inline constexpr double kFeasTol = 1e-12;

/// log g(x) = x ln x for x > 0, 0 at x = 0 (g(x) = x^x, g(0) = 1).
/// Throws on negative input.
double log_g(double x);

/// The stationary point of
///   ln((b_next - z)(b_i - z)^2 / (z (b_i + b_next - z)(b_next - a_i + z)))
/// inside B'_i, i.e. the root (-B - sqrt(B^2-4AC)) / (2A) of
///   A z^2 + B z + C,  A = b_next + b_i - a_i,
///   B = (b_next + b_i) a_i - 3 b_next b_i - b_i^2 - b_next^2,
///   C = b_i^2 b_next,
/// evaluated in the cancellation-free form 2C / (-B + sqrt(B^2-4AC)).
/// Throws std::domain_error when the discriminant is numerically negative
/// (callers fall back to a scan).
double critical_z(double a_i, double b_i, double b_next);

/// 7-dimensional parameter box [a_0,b_0] x ... x [a_6,b_6] over the cut
/// fractions y_i. Shape invariants: 0 <= a_i <= b_i, b_i - a_i <= 0.1.
struct BoxSpec {
  std::array<double, 7> a{};
  std::array<double, 7> b{};
};

struct FactorBound {
  int index = 0;
  double z_star = 0.0;       // maximizer clamped into the closure of B'_i
  double log_factor = 0.0;   // -inf when B'_i is empty
  bool feasible = true;      // B'_i nonempty
  bool used_scan_fallback = false;
};

/// Raised when the per-factor soundness hypothesis
/// max_{z in B'_i} (b_{i+1} - a_i + z) < 1/e fails; bounds computed on such
/// a box would not dominate interior points.
struct UnsoundBoxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// log of max over x in {a0, b0, interior stationary points} of
///   g(x + b1)^2 / (g(x) g(b1)^2).
/// The stationary points of the ratio in x are included as extra candidates
/// beyond the two endpoints; a max over more candidates can only grow, so
/// the bound stays an upper bound for every y0 in [a0,b0], y1 <= b1.
double f0_bound(double a0, double b0, double b1);

/// Feasibility of a box against the constraint families
///   sum a_i <= 1/2 <= sum b_i,  a_i <= 2 b_{i+1} (1 <= i <= 6, b_7 = b_0),
///   b_i >= 0.0446 (0 <= i <= 6),
/// plus the explicit 1/e hypothesis above for each factor index.
/// Throws on shape-invariant violations.
bool box_feasible(const BoxSpec& box);

/// log of max over z in B'_i = [max(0, a_i - b_{i+1}), min(b_i, b_{i+1})] of
///   g(b_i) g(b_{i+1}) g(b_i + b_{i+1} - z)
///   / (g(z) g(b_i - z)^2 g(b_{i+1} - a_i + z) g(b_{i+1} - z)),
/// taking the max of the critical point and both interval endpoints.
/// index i in 1..6; i = 6 wraps to b_0. Throws UnsoundBoxError when the 1/e
/// hypothesis fails for this factor.
FactorBound box_factor(int i, const BoxSpec& box);

/// f0_bound(a_0, b_0, b_1) + sum of the six factor logs. Validates box
/// shape only; an empty B'_i gives -inf. Upper-bounds point_rate(y) for every
/// feasible y inside the box.
double box_bound(const BoxSpec& box);

/// The exact rate expression at a feasible point y (sum y = 1/2 within 1e-12,
/// y_i <= 2 y_{i+1} for 1 <= i <= 6, y_i >= 0.0446): the f0 ratio at y plus
/// each inner max over z in B_i computed by dense scan and golden-section
/// polish. Deliberately independent of critical_z so it can cross-check the
/// closed-form box bounds. Throws on constraint violations.
double point_rate(const std::array<double, 7>& y);

struct CertifyOptions {
  double threshold = 0.99;
  double eps0 = 0.01;
  double eps_min = 0.00125;
  double slack = 1e-6;        // added to every box bound before comparison
  int workers = 0;            // 0: HOMLAB_WORKERS env or hardware concurrency
  std::size_t offender_cap = 10000;
};

struct OffenderBox {
  BoxSpec box;
  double epsilon = 0.0;
  double log_bound = 0.0;
};

struct LevelStats {
  double epsilon = 0.0;
  std::uint64_t enumerated = 0;  // complete grid tuples generated
  std::uint64_t feasible = 0;
  std::uint64_t offenders = 0;   // bound + slack >= ln(threshold)
  double max_log_bound = 0.0;    // over feasible boxes of the level
  bool has_bound = false;
};

struct CertificationReport {
  double threshold = 0.0;
  double log_threshold = 0.0;
  double slack = 0.0;
  std::vector<double> epsilon_schedule;
  std::uint64_t boxes_enumerated = 0;
  std::uint64_t boxes_feasible = 0;
  std::uint64_t boxes_refined = 0;
  double max_log_bound = 0.0;     // over leaf boxes (not refined further)
  BoxSpec worst_box;
  double worst_box_epsilon = 0.0;
  bool certified = false;
  std::uint64_t offender_count = 0;          // exact
  std::vector<OffenderBox> offender_list;    // first offender_cap, canonical order
  std::vector<LevelStats> refinement_histogram;
  std::uint64_t unsound_boxes = 0;   // 1/e hypothesis failures (expected 0)
  std::uint64_t scan_fallbacks = 0;  // negative-discriminant fallbacks (expected 0)
};

/// Branch-and-bound sweep: enumerates the eps0 grid (a_i = j eps0 in
/// [0, 0.24], b_i = a_i + eps0), re-grids every box whose bound reaches the
/// threshold at eps/2 inside itself (128 children, feasibility-filtered)
/// until eps_min. Certified iff no box at eps_min meets the threshold. The
/// report is canonical: identical for any worker count.
CertificationReport certify(const CertifyOptions& options);

std::string report_to_json(const CertificationReport& report);

int resolve_workers(int requested);

}  // namespace homlab::rate

#endif  // HOMLAB_RATE_HPP
