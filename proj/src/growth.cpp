#include "qgames/growth.hpp"

#include "qgames/errors.hpp"

namespace qgames {

namespace {

BigInt pow2(std::size_t e) {
  BigInt one = 1;
  return one << e;
}

BigInt pow4(std::size_t k) { return pow2(2 * k); }

BigInt exact_div(const BigInt& num, unsigned den) {
  if (num % den != 0) throw std::logic_error("closed form did not produce an integer");
  return num / den;
}

}  // namespace

BigInt f_lo(std::size_t r) { return pow2(r) - 1; }

BigInt g_lo(std::size_t r) {
  if (r == 0) throw InvalidArgument("g is defined for r >= 1");
  static const int base[] = {0, 1, 2, 4, 10};
  if (r <= 4) return base[r];
  BigInt g = 10;
  for (std::size_t i = 5; i <= r; ++i) g = i % 2 == 0 ? BigInt(2 * g) : BigInt(2 * g + 1);
  return g;
}

BigInt g_forall(std::size_t r) {
  if (r < 3 || r % 2 == 0) throw InvalidArgument("g_forall is defined for odd r >= 3");
  return exact_div(7 * pow4((r - 1) / 2) - 4, 6);
}

BigInt g_exists(std::size_t r) {
  if (r < 4 || r % 2 == 1) throw InvalidArgument("g_exists is defined for even r >= 4");
  return exact_div(7 * pow4((r - 2) / 2) - 1, 3);
}

BigInt g_forall_recurrence(std::size_t r) {
  if (r < 3 || r % 2 == 0) throw InvalidArgument("g_forall is defined for odd r >= 3");
  BigInt g = 4;
  for (std::size_t i = 4; i <= r; ++i) g = i % 2 == 0 ? BigInt(2 * g + 1) : BigInt(2 * g);
  return g;
}

BigInt g_exists_recurrence(std::size_t r) {
  if (r < 4 || r % 2 == 1) throw InvalidArgument("g_exists is defined for even r >= 4");
  return 2 * g_forall_recurrence(r - 1) + 1;
}

BigInt t_tree(std::size_t r) {
  if (r < 2) throw InvalidArgument("t is defined for r >= 2");
  const std::size_t k = r / 2;
  if (r % 2 == 0) return exact_div(7 * pow4(k) + 24 * BigInt(k) - 16, 18);
  return exact_div(8 * pow4(k) + 12 * BigInt(k) - 8, 9);
}

BigInt t_forall(std::size_t r) {
  if (r < 3) throw InvalidArgument("t_forall is defined for r >= 3");
  return t_tree(r - 1) + 1;
}

BigInt t_tree_recurrence(std::size_t r) {
  if (r < 2) throw InvalidArgument("t is defined for r >= 2");
  std::vector<BigInt> t(r + 1);
  t[2] = 2;
  if (r >= 3) t[3] = 4;
  for (std::size_t i = 4; i <= r; ++i) {
    const std::size_t m = i - 1;
    const BigInt g = m % 2 == 1 ? g_forall_recurrence(m) : g_lo(m);
    t[i] = g + t[i - 2] + 2;
  }
  return t[r];
}

std::vector<GrowthRow> growth_table(std::size_t max_r) {
  std::vector<GrowthRow> rows;
  for (std::size_t r = 2; r <= max_r; ++r) rows.push_back({r, f_lo(r), g_lo(r), t_tree(r)});
  return rows;
}

BigInt sentence_count_upper_bound(std::size_t k, std::size_t c, std::size_t rmax,
                                  std::size_t max_bits) {
  if (k == 0 || c == 0 || rmax == 0) throw InvalidArgument("k, c and rmax must be >= 1");
  // inner = c * k^rmax; the result has k + 2^inner + 1 bits.
  BigInt inner = c;
  for (std::size_t i = 0; i < rmax; ++i) inner *= k;
  auto refuse = [&] {
    throw ResourceLimit("bit-budget", "sentence-count bound exceeds the bit budget of " +
                                          std::to_string(max_bits) + " bits");
  };
  if (inner >= 64) refuse();
  const BigInt bits = BigInt(k) + pow2(static_cast<std::size_t>(inner)) + 1;
  if (bits > max_bits) refuse();
  return pow2(k + (std::size_t{1} << static_cast<std::size_t>(inner)));
}

}  // namespace qgames
