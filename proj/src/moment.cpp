#include "homlab/moment.hpp"

#include <stdexcept>

#include "homlab/hom.hpp"

namespace homlab {

namespace {

/// Factorials 0..n memoized once per top-level call.
struct FactorialTable {
  explicit FactorialTable(int n) : fact(static_cast<std::size_t>(n) + 1) {
    fact[0] = 1;
    for (int i = 1; i <= n; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i) - 1] * i;
  }

  BigInt binomial(std::int64_t a, std::int64_t b) const {
    if (b < 0 || b > a) return 0;
    return fact[static_cast<std::size_t>(a)] /
           (fact[static_cast<std::size_t>(b)] * fact[static_cast<std::size_t>(a - b)]);
  }

  std::vector<BigInt> fact;
};

BigInt tight_pair_count_with(const Composition& c, const std::array<std::int64_t, 7>& m,
                             const FactorialTable& table) {
  const int n = c.total();
  BigInt result = table.fact[static_cast<std::size_t>(n)];
  for (int p : c.parts) result /= table.fact[static_cast<std::size_t>(p)];
  for (std::int64_t mi : m) {
    const BigInt f = table.fact[static_cast<std::size_t>(mi)];
    result *= f * f * f;
  }
  {
    const BigInt choose0 = table.binomial(c.parts[0], m[0]);
    result *= choose0 * choose0 * choose0;
  }
  for (int i = 1; i < 7; ++i) {
    const std::int64_t ni = c.parts[static_cast<std::size_t>(i)];
    const std::int64_t mi = m[static_cast<std::size_t>(i)];
    BigInt inner = 0;
    const BigInt outer = table.binomial(ni, mi);
    for (std::int64_t j = 0; j <= mi; ++j)
      inner += outer * table.binomial(mi, j) * table.binomial(ni - mi, mi - j) *
               table.binomial(ni - j, mi);
    result *= inner;
  }
  return result;
}

}  // namespace

std::optional<std::array<std::int64_t, 7>> cut_counts_from_composition(const Composition& c) {
  const int n = c.total();
  if (n % 2 != 0) throw std::invalid_argument("cut counts: composition total must be even");
  std::array<std::int64_t, 7> m{};
  bool feasible = true;
  for (int i = 0; i < 7; ++i) {
    m[static_cast<std::size_t>(i)] =
        n / 2 - (c.parts[static_cast<std::size_t>((i + 1) % 7)] +
                 c.parts[static_cast<std::size_t>((i + 3) % 7)] +
                 c.parts[static_cast<std::size_t>((i + 5) % 7)]);
    if (m[static_cast<std::size_t>(i)] < 0) feasible = false;
  }
  if (!feasible) return std::nullopt;
  return m;
}

BigInt tight_pair_count(const Composition& c) {
  for (int p : c.parts)
    if (p < 0) throw std::invalid_argument("tight_pair_count: negative class size");
  const int n = c.total();
  if (n % 2 != 0) throw std::invalid_argument("tight_pair_count: n must be even");
  const auto m = cut_counts_from_composition(c);
  if (!m) return 0;
  FactorialTable table(n);
  return tight_pair_count_with(c, *m, table);
}

BigInt triple_space_size(int n) {
  if (n < 0 || n % 2 != 0) throw std::invalid_argument("triple_space_size: n must be even");
  FactorialTable table(n);
  BigInt matchings = table.fact[static_cast<std::size_t>(n)];
  matchings /= BigInt(1) << (n / 2);
  matchings /= table.fact[static_cast<std::size_t>(n / 2)];
  const BigInt m = matchings;
  return m * m * m;
}

CountReport expected_tight_report(int n, bool keep_terms) {
  if (n < 0 || n % 2 != 0) throw std::invalid_argument("expected_tight_report: n must be even");
  if (n > 60) throw std::invalid_argument("expected_tight_report: composition budget n <= 60 exceeded");

  CountReport report;
  report.n = n;
  report.t_size = triple_space_size(n);
  FactorialTable table(n);

  Composition c{};
  // partial[i] accumulates n_{i+1}+n_{i+3}+n_{i+5} as parts get fixed;
  // any partial sum above n/2 already forces m_i < 0
  std::array<int, 7> partial{};
  const int half = n / 2;
  auto rec = [&](auto&& self, int idx, int remaining) -> void {
    if (idx == 6) {
      c.parts[6] = remaining;
      if (const auto m = cut_counts_from_composition(c)) {
        BigInt term = tight_pair_count_with(c, *m, table);
        report.total += term;
        if (keep_terms) report.terms.emplace_back(c, std::move(term));
      }
      c.parts[6] = 0;
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      c.parts[static_cast<std::size_t>(idx)] = v;
      bool ok = true;
      for (int off : {1, 3, 5}) {
        int i = (idx - off + 7) % 7;
        partial[static_cast<std::size_t>(i)] += v;
        if (partial[static_cast<std::size_t>(i)] > half) ok = false;
      }
      if (ok) self(self, idx + 1, remaining - v);
      for (int off : {1, 3, 5}) partial[static_cast<std::size_t>((idx - off + 7) % 7)] -= v;
    }
    c.parts[static_cast<std::size_t>(idx)] = 0;
  };
  rec(rec, 0, n);

  report.expected = BigRat(report.total, report.t_size);
  return report;
}

BigRat expected_tight_upper(int n) { return expected_tight_report(n).expected; }

BigInt brute_force_tight_sum(int n) {
  if (n < 0 || n % 2 != 0) throw std::invalid_argument("brute_force_tight_sum: n must be even");
  if (n > 6) throw std::invalid_argument("brute_force_tight_sum: budget n <= 6 exceeded");

  const auto matchings = all_perfect_matchings(static_cast<std::size_t>(n));
  const CycleTarget c7(7);
  BigInt total = 0;
  for (const auto& m1 : matchings)
    for (const auto& m2 : matchings)
      for (const auto& m3 : matchings) {
        MatchingTriple t(m1, m2, m3);
        total += count_homomorphisms(union_of_matchings(t), c7, /*tight_only=*/true);
      }
  return total;
}

}  // namespace homlab
