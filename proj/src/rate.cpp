#include "homlab/rate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "json.hpp"

namespace homlab::rate {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// x ln x with arguments clamped at 0; rounding can push expressions like
/// b - z a few ulps below zero.
double lg(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void validate_box_shape(const BoxSpec& box) {
  for (int i = 0; i < 7; ++i) {
    const double a = box.a[static_cast<std::size_t>(i)];
    const double b = box.b[static_cast<std::size_t>(i)];
    if (!(a >= -kFeasTol) || !(b >= a - kFeasTol))
      throw std::invalid_argument("box: need 0 <= a_i <= b_i");
    if (b - a > kMaxBoxWidth + kFeasTol)
      throw std::invalid_argument("box: width b_i - a_i exceeds 0.1");
  }
}

enum class BoxClass { infeasible, feasible, unsound };

/// Condition-(6)-style feasibility with inclusive tolerances, then the
/// explicit 1/e hypothesis. No shape validation (hot path).
BoxClass classify_box(const BoxSpec& box) {
  double sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < 7; ++i) {
    sum_a += box.a[static_cast<std::size_t>(i)];
    sum_b += box.b[static_cast<std::size_t>(i)];
    if (box.b[static_cast<std::size_t>(i)] < kMinCutFraction - kFeasTol)
      return BoxClass::infeasible;
  }
  if (sum_a > 0.5 + kFeasTol || sum_b < 0.5 - kFeasTol) return BoxClass::infeasible;
  for (int i = 1; i < 7; ++i)
    if (box.a[static_cast<std::size_t>(i)] >
        2.0 * box.b[static_cast<std::size_t>((i + 1) % 7)] + kFeasTol)
      return BoxClass::infeasible;
  for (int i = 1; i < 7; ++i) {
    const double p = box.b[static_cast<std::size_t>(i)];
    const double q = box.b[static_cast<std::size_t>((i + 1) % 7)];
    const double ai = box.a[static_cast<std::size_t>(i)];
    const double lo = std::max(0.0, ai - q);
    const double hi = std::min(p, q);
    if (lo <= hi && q - ai + hi >= kInvE) return BoxClass::unsound;
  }
  return BoxClass::feasible;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 200 && b - a > 1e-14; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

struct FactorExpression {
  double p, q, ai;  // b_i, b_{i+1}, a_i

  double operator()(double z) const {
    return lg(p) + lg(q) + lg(p + q - z) - lg(z) - 2.0 * lg(p - z) -
           lg(q - ai + z) - lg(q - z);
  }
};

}  // namespace

double log_g(double x) {
  if (x < 0.0) throw std::domain_error("log_g: negative argument");
  return lg(x);
}

double critical_z(double a_i, double b_i, double b_next) {
  if (!(b_i > 0.0) || !(b_next > 0.0))
    throw std::invalid_argument("critical_z: b_i and b_{i+1} must be positive");
  if (a_i > b_i + kFeasTol) throw std::invalid_argument("critical_z: need a_i <= b_i");
  const double A = b_next + b_i - a_i;
  const double B = (b_next + b_i) * a_i - 3.0 * b_next * b_i - b_i * b_i - b_next * b_next;
  const double C = b_i * b_i * b_next;
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) throw std::domain_error("critical_z: negative discriminant");
  // smaller root; -B > 0 always, so this form has no cancellation
  return 2.0 * C / (-B + std::sqrt(disc));
}

double f0_bound(double a0, double b0, double b1) {
  if (!(a0 >= 0.0) || !(b0 >= a0) || b0 - a0 > kMaxBoxWidth + kFeasTol)
    throw std::invalid_argument("f0_bound: box invariants violated on (a0, b0)");
  if (!(b1 > 0.0)) throw std::invalid_argument("f0_bound: b1 must be positive");

  const auto ratio = [&](double x) { return 2.0 * lg(x + b1) - lg(x) - 2.0 * lg(b1); };
  double best = std::max(ratio(a0), ratio(b0));
  // interior stationary points: x^2 + (2 b1 - 1/e) x + b1^2 = 0
  const double s = kInvE - 2.0 * b1;
  const double disc = s * s - 4.0 * b1 * b1;
  if (disc >= 0.0 && s > 0.0) {
    const double r_hi = 0.5 * (s + std::sqrt(disc));
    const double r_lo = b1 * b1 / r_hi;
    for (double x : {r_lo, r_hi})
      if (x > a0 && x < b0) best = std::max(best, ratio(x));
  }
  return best;
}

bool box_feasible(const BoxSpec& box) {
  validate_box_shape(box);
  return classify_box(box) == BoxClass::feasible;
}

FactorBound box_factor(int i, const BoxSpec& box) {
  if (i < 1 || i > 6) throw std::invalid_argument("box_factor: index must be in 1..6");
  validate_box_shape(box);

  FactorBound out;
  out.index = i;
  const double p = box.b[static_cast<std::size_t>(i)];
  const double q = box.b[static_cast<std::size_t>((i + 1) % 7)];
  const double ai = box.a[static_cast<std::size_t>(i)];
  const double lo = std::max(0.0, ai - q);
  const double hi = std::min(p, q);
  if (lo > hi) {
    out.feasible = false;
    out.log_factor = kNegInf;
    return out;
  }
  if (q - ai + hi >= kInvE)
    throw UnsoundBoxError("box_factor: 1/e hypothesis violated, bound would be unsound");

  const FactorExpression f{p, q, ai};
  out.log_factor = f(lo);
  out.z_star = lo;
  if (f(hi) > out.log_factor) {
    out.log_factor = f(hi);
    out.z_star = hi;
  }
  if (p > 0.0 && q > 0.0 && hi - lo > 1e-15) {
    double zc;
    bool have_zc = true;
    try {
      zc = std::clamp(critical_z(ai, p, q), lo, hi);
    } catch (const std::domain_error&) {
      // numerically negative discriminant: dense scan plus golden polish
      out.used_scan_fallback = true;
      have_zc = false;
      constexpr int kScanPoints = 10000;
      double best_z = lo;
      double best_v = f(lo);
      for (int k = 1; k <= kScanPoints; ++k) {
        const double z = lo + (hi - lo) * k / kScanPoints;
        const double v = f(z);
        if (v > best_v) {
          best_v = v;
          best_z = z;
        }
      }
      const double step = (hi - lo) / kScanPoints;
      const double gl = std::max(lo, best_z - step);
      const double gr = std::min(hi, best_z + step);
      const double polished = golden_max([&](double z) { return f(z); }, gl, gr);
      if (std::max(best_v, polished) > out.log_factor) {
        out.log_factor = std::max(best_v, polished);
        out.z_star = best_z;
      }
    }
    if (have_zc) {
      const double v = f(zc);
      if (v > out.log_factor) {
        out.log_factor = v;
        out.z_star = zc;
      }
    }
  }
  return out;
}

namespace {

struct BoundEval {
  double log_bound = 0.0;
  int scan_fallbacks = 0;
};

BoundEval evaluate_box(const BoxSpec& box) {
  BoundEval ev;
  ev.log_bound = f0_bound(box.a[0], box.b[0], box.b[1]);
  for (int i = 1; i < 7; ++i) {
    FactorBound fb = box_factor(i, box);
    if (!fb.feasible) {
      ev.log_bound = kNegInf;
      return ev;
    }
    if (fb.used_scan_fallback) ++ev.scan_fallbacks;
    ev.log_bound += fb.log_factor;
  }
  return ev;
}

}  // namespace

double box_bound(const BoxSpec& box) {
  validate_box_shape(box);
  return evaluate_box(box).log_bound;
}

double point_rate(const std::array<double, 7>& y) {
  double sum = 0.0;
  for (double yi : y) {
    if (yi < kMinCutFraction - kFeasTol)
      throw std::invalid_argument("point_rate: y_i >= 0.0446 violated");
    sum += yi;
  }
  if (std::abs(sum - 0.5) > 1e-12)
    throw std::invalid_argument("point_rate: sum y_i = 1/2 violated");
  for (int i = 1; i < 7; ++i)
    if (y[static_cast<std::size_t>(i)] > 2.0 * y[static_cast<std::size_t>((i + 1) % 7)] + kFeasTol)
      throw std::invalid_argument("point_rate: y_i <= 2 y_{i+1} violated");

  double total = 2.0 * lg(y[0] + y[1]) - lg(y[0]) - 2.0 * lg(y[1]);
  for (int i = 1; i < 7; ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    const double yn = y[static_cast<std::size_t>((i + 1) % 7)];
    const double lo = std::max(0.0, yi - yn);
    const double hi = std::min(yi, yn);
    const auto f = [&](double z) {
      return lg(yi) + lg(yn) + lg(yi + yn - z) - lg(z) - 2.0 * lg(yi - z) -
             lg(yn - yi + z) - lg(yn - z);
    };
    constexpr int kScanPoints = 1024;
    double best_z = lo;
    double best = f(lo);
    for (int k = 1; k <= kScanPoints; ++k) {
      const double z = lo + (hi - lo) * k / kScanPoints;
      const double v = f(z);
      if (v > best) {
        best = v;
        best_z = z;
      }
    }
    if (hi > lo) {
      const double step = (hi - lo) / kScanPoints;
      best = std::max(best, golden_max(f, std::max(lo, best_z - step),
                                       std::min(hi, best_z + step)));
    }
    total += best;
  }
  return total;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HOMLAB_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

using JTuple = std::array<std::int32_t, 7>;

BoxSpec box_from_tuple(const JTuple& j, double eps) {
  BoxSpec box;
  for (int i = 0; i < 7; ++i) {
    box.a[static_cast<std::size_t>(i)] = static_cast<double>(j[static_cast<std::size_t>(i)]) * eps;
    box.b[static_cast<std::size_t>(i)] =
        static_cast<double>(j[static_cast<std::size_t>(i)] + 1) * eps;
  }
  return box;
}

struct SweepAccum {
  std::vector<LevelStats> levels;
  std::uint64_t refined = 0;
  std::uint64_t unsound = 0;
  std::uint64_t fallbacks = 0;
  double max_leaf = kNegInf;
  BoxSpec worst_box{};
  double worst_eps = 0.0;
  bool has_worst = false;
  std::uint64_t offender_count = 0;
  std::vector<OffenderBox> offenders;
};

struct Sweep {
  std::vector<double> schedule;
  double log_threshold = 0.0;
  double slack = 0.0;
  std::size_t offender_cap = 0;

  void note_level_bound(SweepAccum& acc, int level, double bound) const {
    auto& st = acc.levels[static_cast<std::size_t>(level)];
    ++st.feasible;
    if (!st.has_bound || bound > st.max_log_bound) {
      st.max_log_bound = bound;
      st.has_bound = true;
    }
  }

  void visit(const JTuple& j, int level, double bound, bool unsound, SweepAccum& acc) const {
    const double eps = schedule[static_cast<std::size_t>(level)];
    const bool offending = unsound || bound + slack >= log_threshold;
    if (offending) ++acc.levels[static_cast<std::size_t>(level)].offenders;

    if (offending && level + 1 < static_cast<int>(schedule.size())) {
      ++acc.refined;
      const double child_eps = eps * 0.5;
      for (int bits = 0; bits < 128; ++bits) {
        JTuple child;
        for (int i = 0; i < 7; ++i)
          child[static_cast<std::size_t>(i)] =
              2 * j[static_cast<std::size_t>(i)] + ((bits >> i) & 1);
        ++acc.levels[static_cast<std::size_t>(level + 1)].enumerated;
        const BoxSpec child_box = box_from_tuple(child, child_eps);
        switch (classify_box(child_box)) {
          case BoxClass::infeasible:
            break;
          case BoxClass::unsound:
            ++acc.unsound;
            visit(child, level + 1, kPosInf, true, acc);
            break;
          case BoxClass::feasible: {
            const BoundEval ev = evaluate_box(child_box);
            acc.fallbacks += static_cast<std::uint64_t>(ev.scan_fallbacks);
            note_level_bound(acc, level + 1, ev.log_bound);
            visit(child, level + 1, ev.log_bound, false, acc);
            break;
          }
        }
      }
      return;
    }

    // leaf: either below threshold or at the final epsilon
    if (!unsound && (!acc.has_worst || bound > acc.max_leaf)) {
      acc.max_leaf = bound;
      acc.worst_box = box_from_tuple(j, eps);
      acc.worst_eps = eps;
      acc.has_worst = true;
    }
    if (offending) {
      ++acc.offender_count;
      if (acc.offenders.size() < offender_cap)
        acc.offenders.push_back({box_from_tuple(j, eps), eps, bound});
    }
  }
};

void merge_accum(SweepAccum& into, const SweepAccum& from, std::size_t offender_cap) {
  for (std::size_t l = 0; l < into.levels.size(); ++l) {
    into.levels[l].enumerated += from.levels[l].enumerated;
    into.levels[l].feasible += from.levels[l].feasible;
    into.levels[l].offenders += from.levels[l].offenders;
    if (from.levels[l].has_bound &&
        (!into.levels[l].has_bound || from.levels[l].max_log_bound > into.levels[l].max_log_bound)) {
      into.levels[l].max_log_bound = from.levels[l].max_log_bound;
      into.levels[l].has_bound = true;
    }
  }
  into.refined += from.refined;
  into.unsound += from.unsound;
  into.fallbacks += from.fallbacks;
  if (from.has_worst && (!into.has_worst || from.max_leaf > into.max_leaf)) {
    into.max_leaf = from.max_leaf;
    into.worst_box = from.worst_box;
    into.worst_eps = from.worst_eps;
    into.has_worst = true;
  }
  into.offender_count += from.offender_count;
  for (const auto& off : from.offenders) {
    if (into.offenders.size() >= offender_cap) break;
    into.offenders.push_back(off);
  }
}

}  // namespace

CertificationReport certify(const CertifyOptions& options) {
  if (!(options.threshold > 0.0)) throw std::invalid_argument("certify: threshold must be positive");
  if (!(options.eps_min > 0.0) || options.eps_min > options.eps0 + kFeasTol ||
      options.eps0 > kMaxBoxWidth + kFeasTol)
    throw std::invalid_argument("certify: need 0 < eps_min <= eps0 <= 0.1");
  if (!(options.slack >= 0.0)) throw std::invalid_argument("certify: slack must be >= 0");
  const double ratio = options.eps0 / options.eps_min;
  const int halvings = static_cast<int>(std::lround(std::log2(ratio)));
  if (halvings < 0 || std::abs(options.eps0 - std::ldexp(options.eps_min, halvings)) >
                          1e-9 * options.eps0)
    throw std::invalid_argument("certify: eps0 / eps_min must be a power of 2");

  Sweep sweep;
  sweep.log_threshold = std::log(options.threshold);
  sweep.slack = options.slack;
  sweep.offender_cap = options.offender_cap;
  for (int l = 0; l <= halvings; ++l) sweep.schedule.push_back(std::ldexp(options.eps0, -l));

  // Level-0 grid in integer units: a_i = j eps0. These integer windows are
  // speed prefilters only and must stay a superset of what classify_box
  // accepts, hence the loose 1e-6 slop (0.5/double(0.01) sits just below 50).
  const double eps0 = options.eps0;
  const int jmax = static_cast<int>(std::floor(kGridUpperLimit / eps0 + 1e-6));
  int jlo = 0;
  while ((jlo + 1) * eps0 < kMinCutFraction - 1e-9) ++jlo;
  const long smax = static_cast<long>(std::floor(0.5 / eps0 + 1e-6));
  const long smin = static_cast<long>(std::ceil(0.5 / eps0 - 1e-6)) - 7;

  std::vector<JTuple> work;
  std::vector<char> work_unsound;
  std::uint64_t level0_enumerated = 0;
  std::uint64_t level0_unsound = 0;
  JTuple tup{};
  auto enumerate = [&](auto&& self, int depth, long sum_j) -> void {
    if (depth == 7) {
      ++level0_enumerated;
      const BoxSpec box = box_from_tuple(tup, eps0);
      switch (classify_box(box)) {
        case BoxClass::infeasible:
          break;
        case BoxClass::unsound:
          ++level0_unsound;
          work.push_back(tup);
          work_unsound.push_back(1);
          break;
        case BoxClass::feasible:
          work.push_back(tup);
          work_unsound.push_back(0);
          break;
      }
      return;
    }
    for (int j = jlo; j <= jmax; ++j) {
      if (sum_j + j > smax) break;
      if (sum_j + j + static_cast<long>(6 - depth) * jmax < smin) continue;
      if (depth >= 2 && depth <= 6 &&
          tup[static_cast<std::size_t>(depth - 1)] > 2 * j + 2)
        continue;
      tup[static_cast<std::size_t>(depth)] = j;
      self(self, depth + 1, sum_j + j);
    }
  };
  enumerate(enumerate, 0, 0);

  const int workers = resolve_workers(options.workers);
  const std::size_t chunk_count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(work.size(), 1));
  std::vector<SweepAccum> accums(chunk_count);
  for (auto& acc : accums) acc.levels.resize(sweep.schedule.size());

  auto run_chunk = [&](std::size_t chunk) {
    SweepAccum& acc = accums[chunk];
    const std::size_t begin = work.size() * chunk / chunk_count;
    const std::size_t end = work.size() * (chunk + 1) / chunk_count;
    for (std::size_t idx = begin; idx < end; ++idx) {
      const JTuple& j = work[idx];
      if (work_unsound[idx]) {
        acc.unsound += 1;
        sweep.visit(j, 0, kPosInf, true, acc);
        continue;
      }
      const BoxSpec box = box_from_tuple(j, eps0);
      const BoundEval ev = evaluate_box(box);
      acc.fallbacks += static_cast<std::uint64_t>(ev.scan_fallbacks);
      sweep.note_level_bound(acc, 0, ev.log_bound);
      sweep.visit(j, 0, ev.log_bound, false, acc);
    }
  };

  if (chunk_count <= 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(chunk_count);
    for (std::size_t c = 0; c < chunk_count; ++c) threads.emplace_back(run_chunk, c);
    for (auto& t : threads) t.join();
  }

  SweepAccum total;
  total.levels.resize(sweep.schedule.size());
  for (const auto& acc : accums) merge_accum(total, acc, options.offender_cap);

  CertificationReport report;
  report.threshold = options.threshold;
  report.log_threshold = sweep.log_threshold;
  report.slack = options.slack;
  report.epsilon_schedule = sweep.schedule;
  total.levels[0].enumerated = level0_enumerated;
  for (std::size_t l = 0; l < total.levels.size(); ++l) {
    total.levels[l].epsilon = sweep.schedule[l];
    report.boxes_enumerated += total.levels[l].enumerated;
    report.boxes_feasible += total.levels[l].feasible;
  }
  report.boxes_refined = total.refined;
  report.max_log_bound = total.max_leaf;
  report.worst_box = total.worst_box;
  report.worst_box_epsilon = total.worst_eps;
  report.offender_count = total.offender_count;
  report.offender_list = std::move(total.offenders);
  report.refinement_histogram = std::move(total.levels);
  report.unsound_boxes = total.unsound;
  report.scan_fallbacks = total.fallbacks;
  report.certified = report.offender_count == 0;
  return report;
}

std::string report_to_json(const CertificationReport& report) {
  nlohmann::ordered_json j;
  j["threshold"] = report.threshold;
  j["log_threshold"] = report.log_threshold;
  j["slack"] = report.slack;
  j["epsilon_schedule"] = report.epsilon_schedule;
  j["certified"] = report.certified;
  j["boxes_enumerated"] = report.boxes_enumerated;
  j["boxes_feasible"] = report.boxes_feasible;
  j["boxes_refined"] = report.boxes_refined;
  j["max_log_bound"] = report.max_log_bound;
  j["max_bound"] = std::exp(report.max_log_bound);
  j["worst_box"] = {{"a", report.worst_box.a},
                    {"b", report.worst_box.b},
                    {"epsilon", report.worst_box_epsilon}};
  j["offender_count"] = report.offender_count;
  auto offenders = nlohmann::ordered_json::array();
  for (const auto& off : report.offender_list)
    offenders.push_back({{"a", off.box.a},
                         {"b", off.box.b},
                         {"epsilon", off.epsilon},
                         {"log_bound", off.log_bound}});
  j["offender_list"] = std::move(offenders);
  auto histogram = nlohmann::ordered_json::array();
  for (const auto& level : report.refinement_histogram) {
    nlohmann::ordered_json row;
    row["epsilon"] = level.epsilon;
    row["boxes_enumerated"] = level.enumerated;
    row["boxes_feasible"] = level.feasible;
    row["offenders"] = level.offenders;
    if (level.has_bound) row["max_log_bound"] = level.max_log_bound;
    histogram.push_back(std::move(row));
  }
  j["refinement_histogram"] = std::move(histogram);
  j["unsound_boxes"] = report.unsound_boxes;
  j["scan_fallbacks"] = report.scan_fallbacks;
  return j.dump(2) + "\n";
}

}  // namespace homlab::rate
