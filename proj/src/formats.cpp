#include "bwtdisk/formats.hpp"

#include <cstring>

#include "json.hpp"

namespace bwtdisk {

namespace {

void check_magic(Blob& in, const char* magic, std::uint64_t min_size) {
  if (in.size() < min_size) throw io_error(std::string("file too short for ") + magic);
  byte_t got[4];
  in.read_at(0, got);
  if (std::memcmp(got, magic, 4) != 0) throw io_error(std::string("bad magic, expected ") + magic);
}

}  // namespace

void write_bwt_header(Blob& out, const BwtHeader& h) {
  byte_t buf[kBwtHeaderSize] = {'B', 'W', 'T', 'D', kBwtVersion, static_cast<byte_t>(h.codec), 0, 0};
  store_u64(buf + 8, h.n);
  store_u64(buf + 16, h.primary);
  out.write_at(0, buf);
}

BwtHeader read_bwt_header(Blob& in) {
  check_magic(in, "BWTD", kBwtHeaderSize);
  byte_t buf[kBwtHeaderSize];
  in.read_at(0, buf);
  if (buf[4] != kBwtVersion) throw io_error("unsupported bwt file version");
  if (buf[5] > 1) throw io_error("unknown codec in bwt file");
  if (buf[6] != 0 || buf[7] != 0) throw io_error("reserved header bytes must be zero");
  BwtHeader h;
  h.codec = static_cast<Codec>(buf[5]);
  h.n = load_u64(buf + 8);
  h.primary = load_u64(buf + 16);
  if (h.primary > h.n) throw io_error("primary index out of range");
  if (h.codec == Codec::identity && in.size() != kBwtHeaderSize + h.n) throw io_error("payload length mismatch");
  return h;
}

BwtFile read_bwt_file(Blob& in) {
  BwtFile f;
  f.header = read_bwt_header(in);
  std::vector<byte_t> raw(in.size() - kBwtHeaderSize);
  in.read_at(kBwtHeaderSize, raw);
  f.payload = decode(f.header.codec, raw);
  if (f.payload.size() != f.header.n) throw io_error("decoded payload length mismatch");
  return f;
}

std::vector<byte_t> serialize_bwt_file(const BwtFile& f) {
  auto blob = make_memory_blob();
  write_bwt_header(*blob, f.header);
  auto body = encode(f.header.codec, f.payload);
  blob->write_at(kBwtHeaderSize, body);
  return read_all(*blob);
}

BwtFile parse_bwt_file(std::span<const byte_t> bytes) {
  auto blob = make_memory_blob(std::vector<byte_t>(bytes.begin(), bytes.end()));
  return read_bwt_file(*blob);
}

void put_magic(ByteWriter& out, const char* magic) {
  out.write(std::span<const byte_t>(reinterpret_cast<const byte_t*>(magic), 4));
}

std::vector<byte_t> read_all(Blob& in) {
  std::vector<byte_t> out(in.size());
  in.read_at(0, out);
  return out;
}

std::vector<std::uint64_t> read_sa_file(Blob& in) {
  check_magic(in, kSaMagic, 4);
  if ((in.size() - 4) % 8 != 0) throw io_error("suffix array file has a partial entry");
  auto bytes = read_all(in);
  std::vector<std::uint64_t> sa((bytes.size() - 4) / 8);
  for (std::size_t i = 0; i < sa.size(); ++i) sa[i] = load_u64(bytes.data() + 4 + 8 * i);
  return sa;
}

std::vector<std::uint64_t> read_psi_file(Blob& in) {
  check_magic(in, kPsiMagic, 12);
  auto blob = std::shared_ptr<Blob>(&in, [](Blob*) {});
  ByteReader r(blob, Direction::forward, Codec::identity, 4, in.size());
  std::vector<std::uint64_t> psi;
  psi.push_back(get_u64(r));
  std::uint64_t v;
  while (try_get_varint(r, v)) psi.push_back(psi.back() + static_cast<std::uint64_t>(unzigzag(v)));
  return psi;
}

PosdFile read_posd_file(Blob& in) {
  check_magic(in, kPosdMagic, 12);
  if ((in.size() - 12) % 16 != 0) throw io_error("pos_d file has a partial pair");
  auto bytes = read_all(in);
  PosdFile f;
  f.d = load_u64(bytes.data() + 4);
  for (std::size_t off = 12; off < bytes.size(); off += 16)
    f.pairs.emplace_back(load_u64(bytes.data() + off), load_u64(bytes.data() + off + 8));
  return f;
}

std::string stats_json(const StatsReport& s) {
  nlohmann::ordered_json j;
  j["passes"] = s.passes;
  j["rounds"] = s.rounds;
  j["bytes_read"] = s.bytes_read;
  j["bytes_written"] = s.bytes_written;
  j["peak_temp_bytes"] = s.peak_temp_bytes;
  j["wall_ms"] = s.wall_ms;
  return j.dump(2) + "\n";
}

StatsReport parse_stats_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  StatsReport s;
  s.passes = j.at("passes").get<std::uint64_t>();
  s.rounds = j.at("rounds").get<std::uint64_t>();
  s.bytes_read = j.at("bytes_read").get<std::uint64_t>();
  s.bytes_written = j.at("bytes_written").get<std::uint64_t>();
  s.peak_temp_bytes = j.at("peak_temp_bytes").get<std::uint64_t>();
  s.wall_ms = j.at("wall_ms").get<std::uint64_t>();
  if (j.size() != 6) throw std::invalid_argument("unexpected keys in stats report");
  return s;
}

}  // namespace bwtdisk
