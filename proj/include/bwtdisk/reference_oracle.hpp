#pragma once

// Brute-force references over text + sentinel, for validation on small
// inputs. Ranks and positions are 1-based here.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bwtdisk/formats.hpp"
#include "bwtdisk/merge_engine.hpp"

namespace bwtdisk {

inline constexpr std::uint64_t kOracleLimit = std::uint64_t{1} << 20;
inline constexpr int kOracleSentinel = -1;

struct OracleResult {
  std::vector<std::uint64_t> sa;   // sa[i-1]: position of the i-th smallest suffix
  std::vector<std::uint64_t> pos;  // pos[k-1]: rank of the suffix at position k
  std::vector<int> bwt;            // byte value, or kOracleSentinel
  std::vector<std::uint64_t> psi;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pos_d;  // (rank, position) by rank

  std::uint64_t primary() const;        // 0-based sentinel row
  std::vector<byte_t> bwt_payload() const;  // sentinel row dropped
};

// Throws std::length_error when N exceeds kOracleLimit.
OracleResult oracle_all(std::span<const byte_t> text, std::uint64_t d = 1);

// Gap counts for prepending `block` to `old_text` (both without the
// sentinel, which follows old_text).
GapArray oracle_gap(std::span<const byte_t> old_text, std::span<const byte_t> block);

// gt over the positions of text (1-based k = 1..N): suffix k > suffix `from`.
std::vector<bool> oracle_gt(std::span<const byte_t> text, std::uint64_t from);

// Expected output files, byte for byte.
std::vector<byte_t> oracle_bwt_file(std::span<const byte_t> text, Codec codec);
std::vector<byte_t> oracle_sa_file(std::span<const byte_t> text);
std::vector<byte_t> oracle_psi_file(std::span<const byte_t> text);
std::vector<byte_t> oracle_posd_file(std::span<const byte_t> text, std::uint64_t d);

}  // namespace bwtdisk
