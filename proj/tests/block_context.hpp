#pragma once

// Builds the block context of pass h for a text, with gt bits taken from
// brute force.

#include <algorithm>
#include <string_view>
#include <vector>

#include "bwtdisk/block_sort.hpp"
#include "bwtdisk/reference_oracle.hpp"

namespace bwtdisk::testing {

struct PassGeometry {
  std::uint64_t s = 0, e = 0;  // 1-based block range
  std::uint64_t passes = 0;
};

inline PassGeometry geometry(std::uint64_t n, std::uint64_t m, std::uint64_t h) {
  const std::uint64_t N = n + 1;
  PassGeometry g;
  g.passes = (N + m - 1) / m;
  g.e = N - (h - 1) * m;
  g.s = g.e > m ? g.e - m + 1 : 1;
  return g;
}

inline BlockContext context_for_pass(const std::vector<byte_t>& text, std::uint64_t m, std::uint64_t h) {
  const std::uint64_t n = text.size(), N = n + 1;
  auto g = geometry(n, m, h);
  auto view = [&](std::uint64_t a, std::uint64_t b) {  // 1-based [a, b], real bytes only
    b = std::min(b, n);
    if (a > b) return std::string_view();
    return std::string_view(reinterpret_cast<const char*>(text.data()) + a - 1, b - a + 1);
  };
  if (h == 1) return BlockContext::make_first(view(g.s, g.e));
  auto gt = oracle_gt(text, g.e + 1);
  std::vector<bool> gt_next(m - 1);
  for (std::uint64_t d = 1; d < m; ++d) gt_next[d - 1] = gt[g.e + d];
  bool beyond = g.e + m + 1 <= N && gt[g.e + m];
  return BlockContext::make(view(g.s, g.e), view(g.e + 1, g.e + m), h == 2, gt_next, beyond);
}

// Block positions ordered by their full suffixes.
inline std::vector<std::uint32_t> brute_block_sa(const std::vector<byte_t>& text, std::uint64_t m, std::uint64_t h) {
  auto g = geometry(text.size(), m, h);
  auto o = oracle_all(text);
  std::vector<std::uint32_t> sa;
  for (std::uint64_t p = 1; p <= g.e - g.s + 1; ++p) sa.push_back(static_cast<std::uint32_t>(p));
  std::sort(sa.begin(), sa.end(), [&](auto a, auto b) { return o.pos[g.s + a - 2] < o.pos[g.s + b - 2]; });
  return sa;
}

}  // namespace bwtdisk::testing
