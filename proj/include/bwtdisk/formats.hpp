#pragma once

// On-disk output formats. All integers little-endian, all indices 0-based.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bwtdisk/stream_io.hpp"

namespace bwtdisk {

inline constexpr std::uint64_t kBwtHeaderSize = 24;
inline constexpr std::uint8_t kBwtVersion = 1;

struct BwtHeader {
  Codec codec = Codec::identity;
  std::uint64_t n = 0;        // text length without the sentinel
  std::uint64_t primary = 0;  // 0-based row of the removed sentinel row
};

void write_bwt_header(Blob& out, const BwtHeader& h);
BwtHeader read_bwt_header(Blob& in);

// Whole-file view, decoded; for tools and tests.
struct BwtFile {
  BwtHeader header;
  std::vector<byte_t> payload;  // n bytes, sentinel row omitted
};

BwtFile read_bwt_file(Blob& in);
std::vector<byte_t> serialize_bwt_file(const BwtFile& f);
BwtFile parse_bwt_file(std::span<const byte_t> bytes);

// "SA_1" then N u64 positions.
inline constexpr char kSaMagic[] = "SA_1";
// "PSI1", first u64, then zigzag-varint deltas.
inline constexpr char kPsiMagic[] = "PSI1";
// "POSD", d u64, then (rank u64, position u64) pairs.
inline constexpr char kPosdMagic[] = "POSD";

void put_magic(ByteWriter& out, const char* magic);

std::vector<std::uint64_t> read_sa_file(Blob& in);
std::vector<std::uint64_t> read_psi_file(Blob& in);

struct PosdFile {
  std::uint64_t d = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;  // (rank, position)
};
PosdFile read_posd_file(Blob& in);

std::vector<byte_t> read_all(Blob& in);

// The stats JSON object.
struct StatsReport {
  std::uint64_t passes = 0;
  std::uint64_t rounds = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;
  std::uint64_t peak_temp_bytes = 0;
  std::uint64_t wall_ms = 0;
};

std::string stats_json(const StatsReport& s);
StatsReport parse_stats_json(const std::string& text);

}  // namespace bwtdisk
