#include <random>

#include "bwtdisk/stream_io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bwtdisk;
using bwtdisk::testing::bytes;

namespace {

std::vector<byte_t> drain(ByteReader& r) {
  std::vector<byte_t> out;
  byte_t c;
  while (r.next(c)) out.push_back(c);
  return out;
}

std::vector<byte_t> contents(const std::shared_ptr<Blob>& b) {
  std::vector<byte_t> out(b->size());
  b->read_at(0, out);
  return out;
}

}  // namespace

TEST_CASE("open_stream reads forward and backward") {
  testing::ScratchDir dir;
  DiskVolume vol(dir.path());
  vol.create("abc")->write_at(0, bytes("abc"));

  auto fwd = open_stream(vol, "abc", Direction::forward, Codec::identity);
  CHECK(drain(fwd) == bytes("abc"));
  CHECK(fwd.bytes_moved() == 3);

  auto back = open_stream(vol, "abc", Direction::backward, Codec::identity);
  CHECK(drain(back) == bytes("cba"));
}

TEST_CASE("open_stream decodes rle forward and refuses rle backward") {
  MemoryVolume vol;
  vol.create("r")->write_at(0, rle_encode(bytes("aaab")));
  auto r = open_stream(vol, "r", Direction::forward, Codec::rle);
  CHECK(drain(r) == bytes("aaab"));
  CHECK(r.bytes_moved() == 4);
  CHECK_THROWS_AS(open_stream(vol, "r", Direction::backward, Codec::rle), std::invalid_argument);
}

TEST_CASE("open_stream on a missing file fails") {
  testing::ScratchDir dir;
  DiskVolume vol(dir.path());
  CHECK_THROWS_AS(open_stream(vol, "nope", Direction::forward, Codec::identity), io_error);
}

TEST_CASE("backward reads cross buffer boundaries") {
  std::vector<byte_t> data(1000);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<byte_t>(i * 7);
  auto blob = make_memory_blob(data);
  ByteReader r(blob, Direction::backward, Codec::identity, 100, 900, 33);
  auto got = drain(r);
  std::vector<byte_t> want(data.rbegin() + 100, data.rbegin() + 900);
  CHECK(got == want);
}

TEST_CASE("rle_encode format") {
  CHECK(rle_encode({}).empty());
  CHECK(rle_encode(bytes("aaab")) == std::vector<byte_t>{3, 'a', 1, 'b'});
  std::vector<byte_t> z(300, 'z');
  CHECK(rle_encode(z) == std::vector<byte_t>{0xAC, 0x02, 'z'});
  CHECK(rle_decode(std::vector<byte_t>{0xAC, 0x02, 'z'}) == z);
}

TEST_CASE("rle_decode rejects malformed input") {
  CHECK_THROWS_AS(rle_decode(std::vector<byte_t>{0x83}), io_error);
  CHECK_THROWS_AS(rle_decode(std::vector<byte_t>{3}), io_error);
  CHECK_THROWS_AS(rle_decode(std::vector<byte_t>{0, 'a'}), io_error);
}

TEST_CASE("codecs roundtrip random data, buffer-wise and streamed") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = rng() % 3000;
    unsigned sigma = 1 + static_cast<unsigned>(rng() % 4);
    std::vector<byte_t> x(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t run = 1 + rng() % (iter % 2 ? 400 : 3);
      byte_t c = static_cast<byte_t>(rng() % sigma * 85);
      for (std::size_t k = 0; k < run && i < n; ++k) x[i++] = c;
    }
    for (Codec c : {Codec::identity, Codec::rle}) {
      CHECK(decode(c, encode(c, x)) == x);
      auto blob = make_memory_blob();
      {
        ByteWriter w(blob, c, 0, 17);
        for (byte_t b : x) w.put(b);
      }
      CHECK(contents(blob) == encode(c, x));
      ByteReader r(blob, Direction::forward, c, 0, blob->size(), 19);
      CHECK(drain(r) == x);
    }
  }
}

TEST_CASE("ledger_charge tracks live and peak") {
  auto l = ledger_charge(SpaceLedger{}, 100);
  CHECK(l.live_temp_bytes == 100);
  CHECK(l.peak_temp_bytes == 100);
  l = ledger_charge(l, -100);
  CHECK(l.live_temp_bytes == 0);
  CHECK(l.peak_temp_bytes == 100);

  SpaceLedger s;
  for (int d : {5, 7, -3, 1}) s = ledger_charge(s, d);
  CHECK(s.peak_temp_bytes == 12);
  CHECK(s.live_temp_bytes == 10);
  CHECK_THROWS_AS(ledger_charge(SpaceLedger{}, -1), std::logic_error);
}

TEST_CASE("temp files are charged while alive and removed afterwards") {
  testing::ScratchDir dir;
  DiskVolume vol(dir.path());
  SpaceLedger ledger;
  Workspace ws(vol, ledger, 1 << 20);
  std::string name;
  {
    TempFile t = ws.temp("x");
    name = t.name();
    t.blob()->write_at(0, std::vector<byte_t>(1000, 1));
    CHECK(ledger.live_temp_bytes == 1000);
    CHECK(vol.exists(name));
    t.blob()->resize(10);
    CHECK(ledger.live_temp_bytes == 10);
  }
  CHECK_FALSE(vol.exists(name));
  CHECK(ledger.live_temp_bytes == 0);
  CHECK(ledger.peak_temp_bytes == 1000);
  CHECK(ledger.bytes_written == 1000);
}

TEST_CASE("temp files are removed when unwinding") {
  MemoryVolume vol;
  SpaceLedger ledger;
  Workspace ws(vol, ledger, 1 << 20);
  std::string name;
  try {
    TempFile t = ws.temp("x");
    name = t.name();
    t.blob()->write_at(0, bytes("hello"));
    throw std::runtime_error("boom");
  } catch (const std::runtime_error&) {
  }
  CHECK_FALSE(vol.exists(name));
  CHECK(ledger.live_temp_bytes == 0);
}

TEST_CASE("bit streams pack LSB first") {
  auto blob = make_memory_blob();
  {
    ByteWriter w(blob, Codec::identity);
    BitWriter bw(w);
    for (bool b : {true, false, true, true, false, false, false, false, true}) bw.put(b);
    bw.finish();
    CHECK(bw.bit_count() == 9);
  }
  CHECK(contents(blob) == std::vector<byte_t>{0x0D, 0x01});
  ByteReader r(blob, Direction::forward, Codec::identity);
  BitReader br(r, 9);
  std::vector<bool> got;
  for (int i = 0; i < 9; ++i) got.push_back(br.get());
  CHECK(got == std::vector<bool>{true, false, true, true, false, false, false, false, true});
  CHECK(packed_bytes(9) == 2);
  CHECK(packed_bytes(0) == 0);
}

TEST_CASE("BitRewriter rewrites in place and appends") {
  std::mt19937_64 rng(3);
  for (std::size_t chunk : {1, 3, 64}) {
    std::size_t n = 1000;
    std::vector<bool> bits(n);
    auto blob = make_memory_blob();
    {
      BitRewriter rw(blob, 0, chunk);
      for (std::size_t i = 0; i < n; ++i) {
        bits[i] = rng() & 1;
        rw.set(bits[i]);
        rw.advance();
      }
    }
    CHECK(blob->size() == packed_bytes(n));
    std::vector<bool> next(n + 77);
    {
      BitRewriter rw(blob, n, chunk);
      for (std::size_t i = 0; i < n + 77; ++i) {
        CHECK(rw.peek() == (i < n ? static_cast<bool>(bits[i]) : false));
        next[i] = rng() & 1;
        rw.set(next[i]);
        rw.advance();
      }
      rw.finish();
      CHECK(rw.bit_count() == n + 77);
    }
    ByteReader r(blob, Direction::forward, Codec::identity);
    BitReader br(r, n + 77);
    for (std::size_t i = 0; i < n + 77; ++i) CHECK(br.get() == static_cast<bool>(next[i]));
  }
}

TEST_CASE("varints and zigzag") {
  std::vector<byte_t> v;
  put_varint(v, 300);
  CHECK(v == std::vector<byte_t>{0xAC, 0x02});
  for (std::int64_t x : {0LL, -1LL, 1LL, -64LL, 1LL << 40, -(1LL << 62)}) CHECK(unzigzag(zigzag(x)) == x);
  CHECK(zigzag(-1) == 1);
  CHECK(zigzag(1) == 2);
  auto blob = make_memory_blob();
  {
    ByteWriter w(blob, Codec::identity);
    for (std::uint64_t x : {0ULL, 127ULL, 128ULL, ~0ULL}) put_varint(w, x);
    put_u64(w, 0x0102030405060708ULL);
  }
  ByteReader r(blob, Direction::forward, Codec::identity);
  for (std::uint64_t x : {0ULL, 127ULL, 128ULL, ~0ULL}) CHECK(get_varint(r) == x);
  CHECK(get_u64(r) == 0x0102030405060708ULL);
  std::uint64_t tail;
  CHECK_FALSE(try_get_varint(r, tail));
}
