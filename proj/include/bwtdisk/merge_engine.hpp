#pragma once

// Per-pass disk work: locate every old suffix among the new ones (gap
// array), refresh gt, and merge the in-memory block into the partial BWT.

#include <cstdint>
#include <vector>

#include "bwtdisk/block_sort.hpp"
#include "bwtdisk/stream_io.hpp"

namespace bwtdisk {

struct GapArray {
  // counts[j]: old suffixes between new ranks j and j+1 (j = 0..m').
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  // prefix[j] = counts[0] + ... + counts[j].
  std::vector<std::uint64_t> prefix_sums() const;
};

// A partial BWT on disk: `length` rows, one of which (hole_pos, 1-based) is
// the hole and is not stored; the blob holds length - 1 characters.
struct PartialBwt {
  std::uint64_t length = 0;
  std::uint64_t hole_pos = 0;
};

// Given that old suffix T[k..] exceeds exactly i new suffixes and c = T[k-1],
// returns how many new suffixes T[k-1..] exceeds.
std::uint64_t backward_step(std::uint64_t i, std::uint32_t c_code, const RankIndex& idx, std::uint32_t block_last_code,
                            bool gt_bit);

struct GapScan {
  GapArray gap;
  bool gt_region_start = false;  // refreshed gt bit of the first old position
};

// old_text yields the old region's real bytes last-first (the sentinel is
// implied); old_len counts old positions including the sentinel. gt holds
// old_len - 1 bits in decreasing-position order and is rewritten in place,
// then extended by one bit for the first old position.
GapScan compute_gap_and_gt(ByteReader& old_text, std::uint64_t old_len, BitRewriter& gt, const BlockSortResult& res);

// Bit i-1 (i = 1..m'-1): the suffix at block position 1+i exceeds the
// suffix at block position 1.
std::vector<bool> new_block_gt(const BlockSortResult& res);

// Streams the merged partial BWT into `out`. The old hole is patched with
// the block's last character; the new hole is left out of the stream.
PartialBwt merge_partial(ByteReader& old_chars, const PartialBwt& old, const BlockSortResult& res, const GapArray& gap,
                         ByteWriter& out);

}  // namespace bwtdisk
