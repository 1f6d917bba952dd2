#include "bwtdisk/block_sort.hpp"

#include <algorithm>
#include <stdexcept>

#include "bwtdisk/suffix_sort.hpp"

namespace bwtdisk {

BlockContext BlockContext::make(std::string_view block, std::string_view next, bool sentinel,
                                std::vector<bool> gt_next, bool gt_beyond) {
  BlockContext ctx;
  ctx.text.assign(block.begin(), block.end());
  ctx.text.insert(ctx.text.end(), next.begin(), next.end());
  ctx.ends_with_sentinel = sentinel;
  ctx.block_len = block.size();
  ctx.next_len = next.size() + (sentinel ? 1 : 0);
  ctx.gt_next = std::move(gt_next);
  ctx.gt_beyond = gt_beyond;
  ctx.validate();
  return ctx;
}

BlockContext BlockContext::make_first(std::string_view block) {
  BlockContext ctx;
  ctx.text.assign(block.begin(), block.end());
  ctx.ends_with_sentinel = true;
  ctx.block_len = block.size() + 1;
  ctx.validate();
  return ctx;
}

void BlockContext::validate() const {
  if (block_len == 0) throw std::invalid_argument("empty block");
  if (text.size() + (ends_with_sentinel ? 1 : 0) != length())
    throw std::invalid_argument("block context length mismatch");
  if (next_len == 0) {
    if (!ends_with_sentinel) throw std::invalid_argument("first block must end with the sentinel");
  } else {
    if (next_len < block_len) throw std::invalid_argument("next block shorter than current block");
    if (gt_next.size() != next_len - 1) throw std::invalid_argument("gt_next must hold next_len - 1 bits");
  }
}

RankIndex::RankIndex(std::span<const byte_t> stored_bwt, std::size_t hole_row,
                     const std::array<std::uint64_t, 257>& block_code_counts)
    : bwt_(stored_bwt.begin(), stored_bwt.end()), hole_row_(hole_row) {
  less_[0] = 0;
  for (std::size_t c = 0; c < 257; ++c) less_[c + 1] = less_[c] + block_code_counts[c];
  std::size_t nsamples = bwt_.size() / kSampleRate + 1;
  samples_.assign(nsamples * 256, 0);
  std::array<std::uint32_t, 256> running{};
  for (std::size_t s = 1; s < nsamples; ++s) {
    const byte_t* p = bwt_.data() + (s - 1) * kSampleRate;
    for (std::size_t k = 0; k < kSampleRate; ++k) ++running[p[k]];
    std::copy(running.begin(), running.end(), samples_.begin() + static_cast<std::ptrdiff_t>(s * 256));
  }
}

std::uint64_t RankIndex::rank(byte_t c, std::size_t i) const {
  if (i == 0) return 0;
  if (i > bwt_.size()) throw std::out_of_range("rank row beyond block");
  std::size_t s = i / kSampleRate;
  std::size_t base = s * kSampleRate;
  std::uint64_t raw;
  const byte_t* p = bwt_.data();
  if (i - base <= kSampleRate / 2 || base + kSampleRate > bwt_.size()) {
    std::uint32_t n = 0;
    for (std::size_t k = base; k < i; ++k) n += p[k] == c;
    raw = samples_[s * 256 + c] + n;
  } else {
    std::uint32_t n = 0;
    for (std::size_t k = i; k < base + kSampleRate; ++k) n += p[k] == c;
    raw = samples_[(s + 1) * 256 + c] - n;
  }
  if (hole_row_ != 0 && hole_row_ <= i && p[hole_row_ - 1] == c) --raw;
  return raw;
}

std::uint64_t rank_query(const RankIndex& idx, byte_t c, std::size_t i) { return idx.rank(c, i); }

std::vector<std::uint32_t> BlockSortResult::inverse() const {
  std::vector<std::uint32_t> inv(sa_int.size() + 1, 0);
  for (std::size_t r = 0; r < sa_int.size(); ++r) inv[sa_int[r]] = static_cast<std::uint32_t>(r + 1);
  return inv;
}

std::strong_ordering compare_new_suffixes(const BlockContext& ctx, std::size_t i, std::size_t j) {
  if (i == j) return std::strong_ordering::equal;
  if (i > j) return 0 <=> compare_new_suffixes(ctx, j, i);
  // Windows t[i, m'] and t[j, j + m' - i] have equal length and stay inside
  // the block pair; on the first pass the sentinel ends the comparison.
  const std::size_t len = ctx.block_len - i + 1;
  for (std::size_t k = 0; k < len; ++k) {
    std::uint32_t a = ctx.code(i - 1 + k);
    std::uint32_t b = ctx.code(j - 1 + k);
    if (a != b) return a <=> b;
  }
  // Tie: order of next-block suffixes at offsets 0 and j - i.
  bool j_continuation_greater = ctx.gt_next.at(j - i - 1);
  return j_continuation_greater ? std::strong_ordering::less : std::strong_ordering::greater;
}

namespace {

BlockSortResult finish(const BlockContext& ctx, std::vector<std::uint32_t> sa_int) {
  BlockSortResult res;
  const std::size_t m = ctx.block_len;
  res.sa_int = std::move(sa_int);
  res.bwt_int.assign(m, 0);
  for (std::size_t r = 0; r < m; ++r) {
    std::uint32_t p = res.sa_int[r];
    if (p == 1) {
      res.hole_row = r + 1;
    } else {
      res.bwt_int[r] = ctx.text[p - 2];
    }
  }
  res.r1 = res.hole_row;
  res.block_last_code = ctx.block_last_code();
  std::array<std::uint64_t, 257> counts{};
  for (std::size_t k = 0; k < m; ++k) ++counts[ctx.code(k)];
  res.rank_index = RankIndex(res.bwt_int, res.hole_row, counts);
  return res;
}

// z[k] = longest common prefix of pat and pat[k..]; z[0] = |pat|.
std::vector<std::uint32_t> z_function(const BlockContext& ctx, std::size_t off, std::size_t len) {
  std::vector<std::uint32_t> z(len, 0);
  if (len == 0) return z;
  z[0] = static_cast<std::uint32_t>(len);
  std::size_t l = 0, r = 0;
  for (std::size_t k = 1; k < len; ++k) {
    std::size_t v = 0;
    if (k < r) v = std::min<std::size_t>(z[k - l], r - k);
    while (k + v < len && ctx.code(off + v) == ctx.code(off + k + v)) ++v;
    if (k + v > r) {
      l = k;
      r = k + v;
    }
    z[k] = static_cast<std::uint32_t>(v);
  }
  return z;
}

}  // namespace

BlockSortResult sort_block(const BlockContext& ctx) {
  ctx.validate();
  const std::size_t m = ctx.block_len;
  std::vector<std::uint32_t> u;
  std::vector<std::uint32_t> sa;

  if (ctx.next_len == 0) {
    u.resize(m);
    for (std::size_t k = 0; k < m; ++k) u[k] = ctx.code(k);
    sa = suffix_array_sais(u, 257);
    for (auto& p : sa) ++p;
    return finish(ctx, std::move(sa));
  }

  // For each block offset p, decide whether its suffix exceeds the suffix
  // starting right after the block: match against the next block's prefix,
  // fall back to gt when the rest of the block matches completely.
  const std::size_t nl = ctx.next_len;
  std::vector<std::uint32_t> z = z_function(ctx, m, nl);
  u.resize(m + 2);
  std::size_t l = 0, r = 0;
  for (std::size_t p = 0; p < m; ++p) {
    std::size_t k = 0;
    if (p < r) k = std::min<std::size_t>(z[p - l], r - p);
    if (p + k >= r) {
      while (p + k < m && k < nl && ctx.code(p + k) == ctx.code(m + k)) ++k;
      l = p;
      r = p + k;
    }
    const std::size_t window = m - p;
    bool greater;
    if (k < window) {
      greater = ctx.code(p + k) > ctx.code(m + k);
    } else {
      bool gt_d = window < nl ? static_cast<bool>(ctx.gt_next[window - 1]) : ctx.gt_beyond;
      greater = !gt_d;
    }
    u[p] = 3 * ctx.code(p) + (greater ? 3 : 1);
  }
  u[m] = 3 * ctx.code(m) + 2;
  u[m + 1] = 0;
  sa = suffix_array_sais(u, 3 * 257 + 1);
  std::vector<std::uint32_t> sa_int;
  sa_int.reserve(m);
  for (auto p : sa)
    if (p < m) sa_int.push_back(p + 1);
  sa.clear();
  sa.shrink_to_fit();
  u.clear();
  u.shrink_to_fit();
  return finish(ctx, std::move(sa_int));
}

BlockSortResult sort_block_by_comparison(const BlockContext& ctx) {
  ctx.validate();
  std::vector<std::uint32_t> sa(ctx.block_len);
  for (std::size_t k = 0; k < sa.size(); ++k) sa[k] = static_cast<std::uint32_t>(k + 1);
  std::sort(sa.begin(), sa.end(), [&](std::uint32_t a, std::uint32_t b) { return compare_new_suffixes(ctx, a, b) < 0; });
  return finish(ctx, std::move(sa));
}

}  // namespace bwtdisk
