#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bwtdisk/stream_io.hpp"

namespace bwtdisk {

// One key field: little-endian unsigned integer of `width` bytes (1..8) at
// `offset` within the record. Fields compare in declaration order.
struct SortKey {
  std::size_t offset = 0;
  std::size_t width = 8;
  bool descending = false;
};

struct SortSpec {
  std::size_t record_width = 0;
  std::vector<SortKey> keys;
};

struct SortReport {
  std::uint64_t records = 0;
  std::uint64_t runs = 0;
  std::uint64_t merge_levels = 0;
};

// Stable bounded-memory sort of fixed-width records read from `in` and
// written to `out`: run formation within `ws.memory_budget()` bytes, then
// multiway merges over temp runs charged to the workspace ledger.
// Throws std::invalid_argument when the budget holds fewer than 2 records.
SortReport external_sort(Workspace& ws, ByteReader& in, ByteWriter& out, const SortSpec& spec);

// Convenience: sorts a whole temp blob into a fresh temp file.
TempFile external_sort(Workspace& ws, const TempFile& input, const SortSpec& spec, SortReport* report = nullptr);

}  // namespace bwtdisk
