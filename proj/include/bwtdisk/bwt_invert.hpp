#pragma once

// Scan-based BWT inversion: cover the text with about N/log N substrings,
// grow each by one character per round via LF, merge adjacent substrings
// with external list ranking, and finally rotate at the sentinel.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bwtdisk/formats.hpp"
#include "bwtdisk/index_builders.hpp"
#include "bwtdisk/stream_io.hpp"

namespace bwtdisk {

// Header record, 34 bytes on disk: anchor, link, order_rank, offset (u64),
// fetched (u8), flags (u8). Rows are 1-based; offset is the substring's
// index in the run file.
struct Header {
  std::uint64_t anchor = 0;
  std::uint64_t link = 0;
  std::uint64_t order_rank = 0;
  std::uint64_t offset = 0;
  byte_t fetched = 0;
  byte_t flags = 0;
};
inline constexpr std::size_t kHeaderBytes = 34;
inline constexpr byte_t kFetchedValid = 1;
inline constexpr byte_t kFetchedSentinel = 2;

void store_header(byte_t* p, const Header& h);
Header load_header(const byte_t* p);

inline constexpr std::uint64_t kNil = ~std::uint64_t{0};

// Number of substrings kept alive while unmarked rows remain.
std::uint64_t cover_size(std::uint64_t N);

// C[code]: symbols strictly smaller than code over the whole bwt (the
// sentinel is code 0). counts: occurrences within rows 1..row inclusive.
using CountTable = std::array<std::uint64_t, 257>;
using CTable = std::array<std::uint64_t, 258>;
inline std::uint64_t lf_step(std::uint32_t code, const CountTable& counts, const CTable& C) {
  return C[code] + counts[code];
}

// nodes: 16-byte records (id, ptr) where ptr is the predecessor id or kNil.
// Returns 24-byte records (id, head, rank) sorted by id; rank is the
// distance from the chain's first node.
TempFile list_rank(Workspace& ws, const TempFile& nodes);

struct RoundInfo {
  std::uint64_t headers = 0;       // substrings that fetched this round
  std::uint64_t new_marks = 0;     // rows marked by the fetch
  std::uint64_t unmarked_before = 0;
};

// One entry per live substring: rightmost character's row, predecessor
// row and length in characters.
struct CoverEntry {
  std::uint64_t anchor = 0;
  std::uint64_t link = 0;
  std::uint64_t length = 0;
};

struct InvertConfig {
  std::uint64_t memory_budget = kDefaultMemoryBudget;
  std::filesystem::path temp_dir = std::filesystem::temp_directory_path();
  Mode mode = Mode::external;
  // Test hook: called after every settle step with the live cover.
  std::function<void(const std::vector<CoverEntry>&)> observer;
};

struct InvertStats {
  std::uint64_t n = 0;
  std::uint64_t K = 0;
  std::uint64_t rounds = 0;
  std::vector<RoundInfo> round_info;
  SpaceLedger ledger;
  std::uint64_t wall_ms = 0;

  StatsReport report() const;
};

InvertStats invert_bwt(std::shared_ptr<Blob> bwt_file, std::shared_ptr<Blob> out, const InvertConfig& cfg);
std::vector<byte_t> invert_bytes(std::span<const byte_t> bwt_file, const InvertConfig& cfg,
                                 InvertStats* stats = nullptr);

// In-memory LF decoding.
std::vector<byte_t> naive_unbwt(const BwtFile& f);

}  // namespace bwtdisk
