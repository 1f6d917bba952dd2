#pragma once

// In-memory sorting of the suffixes that start in one text block and run
// to the end of the text.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bwtdisk/stream_io.hpp"

namespace bwtdisk {

// Symbol codes used inside blocks: 0 is the sentinel, byte b is b + 1.
inline constexpr std::uint32_t kSentinelCode = 0;
inline constexpr std::uint32_t byte_code(byte_t b) { return std::uint32_t{b} + 1; }

// The current block followed by the previously processed one. On the first
// pass `next_len` is 0 and the block itself ends with the sentinel.
struct BlockContext {
  std::vector<byte_t> text;  // real bytes of block + next block (sentinel not stored)
  std::size_t block_len = 0;
  std::size_t next_len = 0;
  bool ends_with_sentinel = false;  // logical text is `text` followed by the sentinel
  // gt_next[d - 1] == 1 iff the suffix at next-block offset d (0-based) is
  // greater than the suffix at next-block offset 0, for d = 1..next_len-1.
  std::vector<bool> gt_next;
  // Same relation for the first position after the next block; only
  // consulted when the whole block equals a prefix of the next block.
  bool gt_beyond = false;

  std::size_t length() const { return block_len + next_len; }
  // 0-based logical position -> symbol code.
  std::uint32_t code(std::size_t k) const { return k < text.size() ? byte_code(text[k]) : kSentinelCode; }
  bool block_last_is_sentinel() const { return next_len == 0; }
  std::uint32_t block_last_code() const { return code(block_len - 1); }

  // Test helpers. `next` excludes the sentinel, which is appended
  // logically when `sentinel` is set; make_first builds the pass whose
  // block ends with the sentinel.
  static BlockContext make_first(std::string_view block);
  static BlockContext make(std::string_view block, std::string_view next, bool sentinel,
                           std::vector<bool> gt_next = {}, bool gt_beyond = false);
  void validate() const;
};

// Per-block occurrence counts over bwt_int. C counts block characters with
// the hole valued as the block's last character; Rank never counts the hole.
class RankIndex {
 public:
  static constexpr std::size_t kSampleRate = 512;

  RankIndex() = default;
  RankIndex(std::span<const byte_t> stored_bwt, std::size_t hole_row, const std::array<std::uint64_t, 257>& block_code_counts);

  // Number of block characters strictly smaller than `code`.
  std::uint64_t count_less(std::uint32_t code) const { return less_[code]; }
  // Occurrences of byte c among rows 1..i (1-based), hole excluded.
  std::uint64_t rank(byte_t c, std::size_t i) const;
  std::size_t rows() const { return bwt_.size(); }

 private:
  std::vector<byte_t> bwt_;
  std::size_t hole_row_ = 0;
  std::array<std::uint64_t, 258> less_{};
  std::vector<std::uint32_t> samples_;  // 256 counters per sample row, raw (hole slot included)
};

struct BlockSortResult {
  std::vector<std::uint32_t> sa_int;  // 1-based block positions in suffix order
  std::vector<byte_t> bwt_int;        // row r (1-based) at index r-1; hole slot holds 0
  std::size_t hole_row = 0;           // 1-based row with sa_int == 1
  std::size_t r1 = 0;                 // equals hole_row
  std::uint32_t block_last_code = 0;
  RankIndex rank_index;

  std::size_t size() const { return sa_int.size(); }
  bool is_hole(std::size_t row) const { return row == hole_row; }
  // 1-based block position -> 1-based row.
  std::vector<std::uint32_t> inverse() const;
};

// Order of the full text suffixes starting at block positions i and j
// (1-based), using only the block, the next block and gt_next.
std::strong_ordering compare_new_suffixes(const BlockContext& ctx, std::size_t i, std::size_t j);

// Sorts the block suffixes by induced sorting over an alphabet that folds in
// each suffix's relation to the string starting right after the block.
BlockSortResult sort_block(const BlockContext& ctx);

// Same result by comparison sorting with compare_new_suffixes. Quadratic in
// the worst case; kept as an independent route for testing.
BlockSortResult sort_block_by_comparison(const BlockContext& ctx);

std::uint64_t rank_query(const RankIndex& idx, byte_t c, std::size_t i);

}  // namespace bwtdisk
