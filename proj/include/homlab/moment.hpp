#ifndef HOMLAB_MOMENT_HPP
#define HOMLAB_MOMENT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "homlab/graph.hpp"

namespace homlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Class sizes (n_0..n_6) of a map into C_7; n = sum of parts, n even.
struct Composition {
  std::array<int, 7> parts{};

  int total() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
  }
};

/// Cut counts m_i = n/2 - (n_{i+1} + n_{i+3} + n_{i+5}), indices mod 7.
/// Returns nullopt when some m_i < 0 (no tight map can have these class
/// sizes). Throws on odd n.
std::optional<std::array<std::int64_t, 7>> cut_counts_from_composition(const Composition& c);

/// Exact number of pairs (h, T) where h has class sizes c and h is a tight
/// homomorphism from union(T) to C_7:
///   multinomial(n; n_0..n_6) * prod_i m_i!^3 * C(n_0,m_0)^3
///   * prod_{i=1..6} sum_j C(n_i,m_i) C(m_i,j) C(n_i-m_i,m_i-j) C(n_i-j,m_i).
/// The inner sum counts triples of m_i-subsets of class i with empty common
/// intersection, which is exactly the tightness restriction on that class.
BigInt tight_pair_count(const Composition& c);

/// |T| = (n! / (2^{n/2} (n/2)!))^3, the number of ordered matching triples.
BigInt triple_space_size(int n);

struct CountReport {
  int n = 0;
  BigInt total;        // sum over compositions of tight_pair_count
  BigInt t_size;       // |T|
  BigRat expected;     // total / |T|
  std::vector<std::pair<Composition, BigInt>> terms;  // populated when keep_terms
};

/// Enumerates compositions of n into 7 parts in lexicographic order with
/// prefix pruning (a partial prefix that already forces some m_i < 0 is
/// abandoned) and sums tight_pair_count. Budget: n <= 60.
CountReport expected_tight_report(int n, bool keep_terms = false);

/// total / |T| as an exact rational; the expected number of tight
/// homomorphisms of a random union multigraph into C_7.
BigRat expected_tight_upper(int n);

/// Ground-truth oracle for the counting formula: sums, over all maps h of n
/// vertices into C_7, the number of ordered matching triples whose union
/// admits h as a tight homomorphism. Enumerates all ((n-1)!!)^3 triples;
/// budget n <= 6.
BigInt brute_force_tight_sum(int n);

}  // namespace homlab

#endif  // HOMLAB_MOMENT_HPP
