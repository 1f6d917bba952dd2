#pragma once

// Blockwise right-to-left builders for the BWT, suffix array, Psi and
// pos_d of a byte file with a conceptual sentinel appended.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "bwtdisk/formats.hpp"
#include "bwtdisk/stream_io.hpp"

namespace bwtdisk {

enum class Mode { external, internal };
enum class Layout { two_file, in_place };
enum class Product { bwt, sa, psi, posd };

inline constexpr std::uint64_t kDefaultBlockSize = std::uint64_t{64} << 20;
inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{64} << 20;

struct BuildConfig {
  std::uint64_t block_size = kDefaultBlockSize;
  Codec codec = Codec::identity;  // partial and final bwt payloads only
  Mode mode = Mode::external;
  Layout layout = Layout::two_file;
  std::uint64_t memory_budget = kDefaultMemoryBudget;
  std::uint64_t page_size = 4096;  // accounting only
  std::filesystem::path temp_dir = std::filesystem::temp_directory_path();
  std::uint64_t d = 1;  // pos_d step
};

struct BuildStats {
  std::uint64_t n = 0;
  std::uint64_t block_size = 0;  // m actually used
  SpaceLedger ledger;
  std::uint64_t wall_ms = 0;

  StatsReport report() const;
};

// Internal mode sizes blocks from the memory budget; a block costs about
// 32 bytes of RAM per character while it is sorted and ranked.
inline constexpr std::uint64_t kInternalBytesPerChar = 32;
std::uint64_t effective_block_size(const BuildConfig& cfg);
std::uint64_t pass_count(std::uint64_t n, std::uint64_t m);

BuildStats build(Product what, std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg);

BuildStats build_bwt(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg);
BuildStats build_sa(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg);
BuildStats build_psi(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg);
BuildStats build_posd(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg);
// Same pass logic with every stream held in memory.
BuildStats run_internal_mode(Product what, std::shared_ptr<Blob> input, std::shared_ptr<Blob> output,
                             BuildConfig cfg);

// In-memory convenience wrapper returning the output file bytes.
std::vector<byte_t> build_bytes(Product what, std::span<const byte_t> text, const BuildConfig& cfg,
                                BuildStats* stats = nullptr);

}  // namespace bwtdisk
