#include "bwtdisk/formats.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bwtdisk;
using bwtdisk::testing::bytes;

TEST_CASE("bwt header layout") {
  auto blob = make_memory_blob();
  write_bwt_header(*blob, BwtHeader{Codec::rle, 0x0102030405060708ull, 5});
  auto raw = read_all(*blob);
  REQUIRE(raw.size() == kBwtHeaderSize);
  CHECK(std::vector<byte_t>(raw.begin(), raw.begin() + 8) == std::vector<byte_t>{'B', 'W', 'T', 'D', 1, 1, 0, 0});
  CHECK(raw[8] == 0x08);
  CHECK(raw[15] == 0x01);
  CHECK(raw[16] == 5);
}

TEST_CASE("bwt file round trip and validation") {
  BwtFile f;
  f.header = BwtHeader{Codec::identity, 3, 2};
  f.payload = bytes("aba");
  auto raw = serialize_bwt_file(f);
  CHECK(raw.size() == kBwtHeaderSize + 3);
  auto g = parse_bwt_file(raw);
  CHECK(g.header.primary == 2);
  CHECK(g.payload == f.payload);

  f.header.codec = Codec::rle;
  f.payload = std::vector<byte_t>(1000, 'z');
  f.header.n = 1000;
  raw = serialize_bwt_file(f);
  CHECK(raw.size() < kBwtHeaderSize + 100);
  CHECK(parse_bwt_file(raw).payload == f.payload);

  auto bad = raw;
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_bwt_file(bad), io_error);
  bad = raw;
  bad[4] = 2;
  CHECK_THROWS_AS(parse_bwt_file(bad), io_error);
  bad = raw;
  bad[5] = 7;
  CHECK_THROWS_AS(parse_bwt_file(bad), io_error);
  bad = raw;
  bad[6] = 1;
  CHECK_THROWS_AS(parse_bwt_file(bad), io_error);
  bad = raw;
  bad[16] = 0xFF;
  bad[17] = 0xFF;
  CHECK_THROWS_AS(parse_bwt_file(bad), io_error);
  CHECK_THROWS_AS(parse_bwt_file(std::vector<byte_t>(10)), io_error);
}

TEST_CASE("index file readers") {
  auto sa = make_memory_blob(std::vector<byte_t>{'S', 'A', '_', '1', 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(read_sa_file(*sa) == std::vector<std::uint64_t>{1, 0});
  auto psi = make_memory_blob(std::vector<byte_t>{'P', 'S', 'I', '1', 2, 0, 0, 0, 0, 0, 0, 0, 3, 6, 3});
  CHECK(read_psi_file(*psi) == std::vector<std::uint64_t>{2, 0, 3, 1});
  auto bad = make_memory_blob(std::vector<byte_t>{'S', 'A', '_', '1', 1});
  CHECK_THROWS_AS(read_sa_file(*bad), io_error);
  auto wrong = make_memory_blob(std::vector<byte_t>{'P', 'S', 'I', '1', 2, 0, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(read_sa_file(*wrong), io_error);
}

TEST_CASE("stats json is stable") {
  StatsReport r{3, 0, 100, 200, 50, 7};
  const std::string golden =
      "{\n"
      "  \"passes\": 3,\n"
      "  \"rounds\": 0,\n"
      "  \"bytes_read\": 100,\n"
      "  \"bytes_written\": 200,\n"
      "  \"peak_temp_bytes\": 50,\n"
      "  \"wall_ms\": 7\n"
      "}";
  auto got = stats_json(r);
  while (!got.empty() && got.back() == '\n') got.pop_back();
  CHECK(got == golden);
  auto back = parse_stats_json(golden);
  CHECK(back.passes == 3);
  CHECK(back.peak_temp_bytes == 50);
  CHECK_THROWS(parse_stats_json("{\"passes\": 1}"));
}
