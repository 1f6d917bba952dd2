#include "bwtdisk/merge_engine.hpp"

#include <numeric>
#include <stdexcept>

namespace bwtdisk {

std::uint64_t GapArray::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::vector<std::uint64_t> GapArray::prefix_sums() const {
  std::vector<std::uint64_t> p(counts.size());
  std::partial_sum(counts.begin(), counts.end(), p.begin());
  return p;
}

std::uint64_t backward_step(std::uint64_t i, std::uint32_t c_code, const RankIndex& idx, std::uint32_t block_last_code,
                            bool gt_bit) {
  if (c_code == kSentinelCode) return 0;
  std::uint64_t j = idx.count_less(c_code) + idx.rank(static_cast<byte_t>(c_code - 1), static_cast<std::size_t>(i));
  if (c_code == block_last_code && gt_bit) ++j;
  return j;
}

GapScan compute_gap_and_gt(ByteReader& old_text, std::uint64_t old_len, BitRewriter& gt, const BlockSortResult& res) {
  if (old_len == 0) throw std::invalid_argument("old region is empty");
  if (gt.bit_count() != old_len - 1) throw io_error("gt length does not match the old region");
  const std::uint64_t r1 = res.r1;
  const RankIndex& idx = res.rank_index;
  GapScan out;
  out.gap.counts.assign(res.size() + 1, 0);
  auto& gap = out.gap.counts;

  // The sentinel suffix precedes every new suffix.
  std::uint64_t i = 0;
  ++gap[0];
  for (std::uint64_t step = 0; step + 1 < old_len; ++step) {
    bool old_bit = gt.peek();
    gt.set(r1 <= i);
    gt.advance();
    byte_t c;
    if (!old_text.next(c)) throw io_error("old text shorter than the old region");
    i = backward_step(i, byte_code(c), idx, res.block_last_code, old_bit);
    ++gap[i];
  }
  byte_t extra;
  if (old_text.next(extra)) throw io_error("old text longer than the old region");
  out.gt_region_start = r1 <= i;
  gt.set(out.gt_region_start);
  gt.advance();
  return out;
}

std::vector<bool> new_block_gt(const BlockSortResult& res) {
  const std::size_t m = res.size();
  if (m <= 1) return {};
  auto inv = res.inverse();
  std::vector<bool> bits(m - 1);
  for (std::size_t p = 2; p <= m; ++p) bits[p - 2] = inv[p] > res.r1;
  return bits;
}

PartialBwt merge_partial(ByteReader& old_chars, const PartialBwt& old, const BlockSortResult& res, const GapArray& gap,
                         ByteWriter& out) {
  const std::size_t m = res.size();
  if (gap.counts.size() != m + 1) throw std::invalid_argument("gap array size does not match block");
  if (gap.total() != old.length) throw std::invalid_argument("gap mass does not match old partial length");
  if (old.length > 0 && res.block_last_code == kSentinelCode)
    throw std::invalid_argument("only the first block may end with the sentinel");
  const byte_t patch = static_cast<byte_t>(res.block_last_code - 1);

  PartialBwt next{old.length + m, 0};
  std::uint64_t row = 0;      // rows emitted so far
  std::uint64_t old_row = 0;  // old rows consumed
  for (std::size_t j = 0; j <= m; ++j) {
    for (std::uint64_t g = gap.counts[j]; g > 0; --g) {
      ++old_row;
      ++row;
      if (old_row == old.hole_pos) {
        out.put(patch);
      } else {
        byte_t c;
        if (!old_chars.next(c)) throw io_error("old partial bwt shorter than declared");
        out.put(c);
      }
    }
    if (j < m) {
      ++row;
      if (res.is_hole(j + 1)) {
        next.hole_pos = row;
      } else {
        out.put(res.bwt_int[j]);
      }
    }
  }
  return next;
}

}  // namespace bwtdisk
