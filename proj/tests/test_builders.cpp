#include <random>

#include "bwtdisk/index_builders.hpp"
#include "bwtdisk/reference_oracle.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bwtdisk;
using bwtdisk::testing::bytes;

namespace {

BuildConfig cfg_with(std::uint64_t m) {
  BuildConfig c;
  c.block_size = m;
  c.memory_budget = 1 << 20;
  return c;
}

std::vector<std::uint64_t> sa_of(const std::vector<byte_t>& file) {
  auto blob = make_memory_blob(file);
  return read_sa_file(*blob);
}

std::vector<std::uint64_t> psi_of(const std::vector<byte_t>& file) {
  auto blob = make_memory_blob(file);
  return read_psi_file(*blob);
}

}  // namespace

TEST_CASE("bwt of \"a\"") {
  for (std::uint64_t m : {1, 2, 64}) {
    auto f = parse_bwt_file(build_bytes(Product::bwt, bytes("a"), cfg_with(m)));
    CHECK(f.header.n == 1);
    CHECK(f.header.primary == 1);
    CHECK(f.payload == bytes("a"));
  }
}

TEST_CASE("bwt of \"aba\"") {
  for (std::uint64_t m : {1, 2, 3, 4, 100}) {
    auto f = parse_bwt_file(build_bytes(Product::bwt, bytes("aba"), cfg_with(m)));
    CHECK(f.payload == bytes("aba"));
    CHECK(f.header.primary == 2);
  }
}

TEST_CASE("bwt of mississippi matches brute force for both codecs") {
  auto t = bytes("mississippi");
  for (Codec c : {Codec::identity, Codec::rle}) {
    for (std::uint64_t m : {1, 2, 3, 5, 11, 12, 64}) {
      auto c2 = cfg_with(m);
      c2.codec = c;
      CHECK(build_bytes(Product::bwt, t, c2) == oracle_bwt_file(t, c));
    }
  }
}

TEST_CASE("empty input") {
  auto f = parse_bwt_file(build_bytes(Product::bwt, {}, cfg_with(4)));
  CHECK(f.header.n == 0);
  CHECK(f.header.primary == 0);
  CHECK(f.payload.empty());
  CHECK(sa_of(build_bytes(Product::sa, {}, cfg_with(4))) == std::vector<std::uint64_t>{0});
  CHECK(psi_of(build_bytes(Product::psi, {}, cfg_with(4))) == std::vector<std::uint64_t>{0});
}

TEST_CASE("sa and psi of \"aba\"") {
  for (std::uint64_t m : {1, 2, 3, 4}) {
    CHECK(sa_of(build_bytes(Product::sa, bytes("aba"), cfg_with(m))) == std::vector<std::uint64_t>{3, 2, 0, 1});
    // 1-based [3,1,4,2]
    CHECK(psi_of(build_bytes(Product::psi, bytes("aba"), cfg_with(m))) == std::vector<std::uint64_t>{2, 0, 3, 1});
  }
}

TEST_CASE("pos_d examples") {
  auto c = cfg_with(2);
  c.d = 2;
  auto blob = make_memory_blob(build_bytes(Product::posd, bytes("baa"), c));
  auto p = read_posd_file(*blob);
  CHECK(p.d == 2);
  using P = std::pair<std::uint64_t, std::uint64_t>;
  CHECK(p.pairs == std::vector<P>{{0, 3}, {2, 1}});

  c.d = 9;
  blob = make_memory_blob(build_bytes(Product::posd, bytes("baa"), c));
  CHECK(read_posd_file(*blob).pairs.empty());

  // d = 1 gives the inverse suffix array, listed by rank
  auto t = bytes("mississippi");
  c.d = 1;
  blob = make_memory_blob(build_bytes(Product::posd, t, c));
  auto all = read_posd_file(*blob).pairs;
  auto o = oracle_all(t);
  REQUIRE(all.size() == t.size() + 1);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].first == i);
    CHECK(o.pos[all[i].second] == i + 1);
  }
}

TEST_CASE("random texts equal the oracle for every product and block size") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t n = rng() % 200;
    unsigned sigma = std::vector<unsigned>{1, 2, 4, 26, 255}[rng() % 5];
    auto t = bwtdisk::testing::random_text(rng, n, sigma, sigma == 255 ? 0 : 'a');
    auto want_bwt = oracle_bwt_file(t, Codec::rle);
    auto want_sa = oracle_sa_file(t);
    auto want_psi = oracle_psi_file(t);
    std::uint64_t d = 1 + rng() % 5;
    auto want_posd = oracle_posd_file(t, d);
    for (std::uint64_t m : {1, 2, 7, 64, 4096}) {
      CAPTURE(n);
      CAPTURE(sigma);
      CAPTURE(m);
      auto c = cfg_with(m);
      c.d = d;
      c.codec = Codec::rle;
      CHECK(build_bytes(Product::bwt, t, c) == want_bwt);
      c.codec = Codec::identity;
      CHECK(build_bytes(Product::sa, t, c) == want_sa);
      CHECK(build_bytes(Product::psi, t, c) == want_psi);
      CHECK(build_bytes(Product::posd, t, c) == want_posd);
    }
  }
}

TEST_CASE("products are mutually consistent") {
  std::mt19937_64 rng(11);
  auto t = bwtdisk::testing::random_text(rng, 300, 3);
  const std::uint64_t N = t.size() + 1;
  auto c = cfg_with(17);
  auto sa = sa_of(build_bytes(Product::sa, t, c));
  auto psi = psi_of(build_bytes(Product::psi, t, c));
  auto f = parse_bwt_file(build_bytes(Product::bwt, t, c));
  std::size_t k = 0;
  for (std::uint64_t i = 0; i < N; ++i) {
    CHECK(sa[psi[i]] == (sa[i] + 1) % N);
    if (i == f.header.primary) {
      CHECK(sa[i] == 0);
      continue;
    }
    CHECK(f.payload[k++] == t[sa[i] - 1]);
  }
}

TEST_CASE("in-place layout gives the same file as two-file") {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 20; ++iter) {
    auto t = bwtdisk::testing::random_text(rng, rng() % 500, 1 + rng() % 4);
    for (std::uint64_t m : {1, 3, 16, 1000}) {
      auto c = cfg_with(m);
      auto two = build_bytes(Product::bwt, t, c);
      c.layout = Layout::in_place;
      CHECK(build_bytes(Product::bwt, t, c) == two);
    }
  }
}

TEST_CASE("in-place layout is only for the identity-coded bwt") {
  auto c = cfg_with(4);
  c.layout = Layout::in_place;
  CHECK_THROWS_AS(build_bytes(Product::sa, bytes("abc"), c), std::invalid_argument);
  c.codec = Codec::rle;
  CHECK_THROWS_AS(build_bytes(Product::bwt, bytes("abc"), c), std::invalid_argument);
}

TEST_CASE("internal mode matches external mode") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 10; ++iter) {
    auto t = bwtdisk::testing::random_text(rng, rng() % 3000, 1 + rng() % 26);
    for (Product p : {Product::bwt, Product::sa, Product::psi, Product::posd}) {
      auto c = cfg_with(64);
      c.d = 3;
      c.memory_budget = 64 * kInternalBytesPerChar;
      auto ext = build_bytes(p, t, c);
      c.mode = Mode::internal;
      BuildStats st;
      CHECK(build_bytes(p, t, c, &st) == ext);
      CHECK(st.block_size == 64);
      CHECK(st.ledger.passes == pass_count(t.size(), 64));
    }
  }
}

TEST_CASE("internal block size comes from the memory budget") {
  BuildConfig c;
  c.mode = Mode::internal;
  c.memory_budget = 1 << 20;
  CHECK(effective_block_size(c) == (1 << 20) / kInternalBytesPerChar);
  c.memory_budget = 3;
  CHECK(effective_block_size(c) == 1);
  c.mode = Mode::external;
  c.block_size = 77;
  CHECK(effective_block_size(c) == 77);
  c.block_size = 0;
  CHECK_THROWS_AS(effective_block_size(c), std::invalid_argument);
}

TEST_CASE("pass count and temp accounting") {
  CHECK(pass_count(0, 5) == 1);
  CHECK(pass_count(4, 5) == 1);
  CHECK(pass_count(5, 5) == 2);
  CHECK(pass_count(10, 1) == 11);
  std::mt19937_64 rng(9);
  auto t = bwtdisk::testing::random_text(rng, 1000, 4);
  for (std::uint64_t m : {1, 10, 333, 1001, 5000}) {
    for (Product p : {Product::bwt, Product::sa, Product::psi, Product::posd}) {
      BuildStats st;
      build_bytes(p, t, cfg_with(m), &st);
      CHECK(st.ledger.passes == (t.size() + m) / m);
      CHECK(st.ledger.live_temp_bytes == 0);
      CHECK(st.report().passes == st.ledger.passes);
    }
  }
}

TEST_CASE("build on disk files") {
  bwtdisk::testing::ScratchDir dir;
  auto t = bytes("abracadabra");
  {
    auto in = open_file_blob(dir / "in", true);
    in->write_at(0, t);
  }
  auto c = cfg_with(3);
  c.temp_dir = dir.path();
  auto st = build_bwt(open_file_blob(dir / "in", false), open_file_blob(dir / "out", true), c);
  CHECK(st.ledger.passes == 4);
  auto out = open_file_blob(dir / "out", false);
  CHECK(read_all(*out) == oracle_bwt_file(t, Codec::identity));
  // temp files are gone
  std::size_t left = 0;
  for (auto& e : std::filesystem::directory_iterator(dir.path())) left += e.path().filename() != "in" && e.path().filename() != "out";
  CHECK(left == 0);
}
