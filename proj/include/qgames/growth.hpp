#pragma once

// Exact growth functions for linear orders (f, g, g_forall, g_exists) and
// rooted trees (t, t_forall), and the counting bound on sentences.

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qgames {

using BigInt = boost::multiprecision::cpp_int;

/// 2^r - 1: the E-F threshold for quantifier rank r.
BigInt f_lo(std::size_t r);
/// g(1)=1, g(2)=2, g(3)=4, g(4)=10; then 2g(r-1) for even r and
/// 2g(r-1)+1 for odd r.
BigInt g_lo(std::size_t r);
/// Closed form (7*4^k - 4)/6 with k = (r-1)/2; r odd and >= 3.
BigInt g_forall(std::size_t r);
/// Closed form (7*4^k - 1)/3 with k = (r-2)/2; r even and >= 4.
BigInt g_exists(std::size_t r);
/// The alternating recurrences g_forall(3) = 4, g_exists(2k) =
/// 2 g_forall(2k-1) + 1, g_forall(2k+1) = 2 g_exists(2k).
BigInt g_forall_recurrence(std::size_t r);
BigInt g_exists_recurrence(std::size_t r);

/// t(2k) = (7*4^k + 24k - 16)/18, t(2k+1) = (8*4^k + 12k - 8)/9; r >= 2.
BigInt t_tree(std::size_t r);
/// t(r-1) + 1; r >= 3.
BigInt t_forall(std::size_t r);
/// t(r) = G(r-1) + t(r-2) + 2 from t(2) = 2, t(3) = 4, where G(m) is
/// g_forall(m) for odd m and g(m) for even m; r >= 2.
BigInt t_tree_recurrence(std::size_t r);

struct GrowthRow {
  std::size_t r;
  BigInt f, g, t;
};
/// Rows r = 2..max_r.
std::vector<GrowthRow> growth_table(std::size_t max_r);

/// 2^(k + 2^(c * k^rmax)), refused (ResourceLimit) when the result would
/// need more than `max_bits` bits.
BigInt sentence_count_upper_bound(std::size_t k, std::size_t c, std::size_t rmax,
                                  std::size_t max_bits = std::size_t{1} << 20);

}  // namespace qgames
