#include <algorithm>
#include <random>

#include "bwtdisk/external_sort.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bwtdisk;

namespace {

constexpr std::size_t kWidth = 12;  // u32 key, u64 payload

std::vector<byte_t> make_records(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& recs) {
  std::vector<byte_t> out;
  for (auto [k, v] : recs) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<byte_t>(k >> (8 * i)));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<byte_t>(v >> (8 * i)));
  }
  return out;
}

std::vector<byte_t> run_sort(const std::vector<byte_t>& data, std::uint64_t budget, SortReport* report = nullptr,
                             SpaceLedger* ledger_out = nullptr) {
  MemoryVolume vol;
  SpaceLedger ledger;
  Workspace ws(vol, ledger, budget);
  auto in_blob = make_memory_blob(data);
  auto out_blob = make_memory_blob();
  {
    ByteReader in(in_blob, Direction::forward, Codec::identity);
    ByteWriter out(out_blob, Codec::identity);
    auto r = external_sort(ws, in, out, SortSpec{kWidth, {{0, 4}}});
    if (report) *report = r;
  }
  if (ledger_out) *ledger_out = ledger;
  std::vector<byte_t> got(out_blob->size());
  out_blob->read_at(0, got);
  return got;
}

}  // namespace

TEST_CASE("external_sort of nothing is nothing") { CHECK(run_sort({}, 4096).empty()); }

TEST_CASE("external_sort keeps sorted input and equal keys in order") {
  std::vector<std::pair<std::uint32_t, std::uint64_t>> recs;
  for (std::uint64_t i = 0; i < 1000; ++i) recs.emplace_back(static_cast<std::uint32_t>(i / 10), i);
  auto data = make_records(recs);
  CHECK(run_sort(data, 4096) == data);
}

TEST_CASE("external_sort matches an in-memory stable sort") {
  std::mt19937_64 rng(11);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> recs;
  for (std::uint64_t i = 0; i < 100000; ++i) recs.emplace_back(static_cast<std::uint32_t>(rng() % 5000), i);
  auto data = make_records(recs);
  SortReport report;
  SpaceLedger ledger;
  auto got = run_sort(data, 4096, &report, &ledger);
  std::stable_sort(recs.begin(), recs.end(), [](auto& a, auto& b) { return a.first < b.first; });
  CHECK(got == make_records(recs));
  CHECK(report.records == 100000);
  CHECK(report.runs > 1);
  CHECK(report.merge_levels >= 2);
  CHECK(ledger.live_temp_bytes == 0);
  CHECK(ledger.peak_temp_bytes > 0);
}

TEST_CASE("external_sort works for every budget down to two records") {
  std::mt19937_64 rng(5);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> recs;
  for (std::uint64_t i = 0; i < 300; ++i) recs.emplace_back(static_cast<std::uint32_t>(rng() % 17), i);
  auto data = make_records(recs);
  std::stable_sort(recs.begin(), recs.end(), [](auto& a, auto& b) { return a.first < b.first; });
  auto want = make_records(recs);
  for (std::uint64_t budget : {80, 120, 500, 4096, 1 << 20}) CHECK(run_sort(data, budget) == want);
}

TEST_CASE("external_sort rejects a budget below two records") {
  CHECK_THROWS_AS(run_sort(make_records({{1, 1}}), 10), std::invalid_argument);
}

TEST_CASE("external_sort with several keys and descending order") {
  MemoryVolume vol;
  SpaceLedger ledger;
  Workspace ws(vol, ledger, 1000);
  std::mt19937_64 rng(9);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> recs;
  for (std::uint64_t i = 0; i < 2000; ++i) recs.emplace_back(static_cast<std::uint32_t>(rng() % 4), rng() % 50);
  TempFile in = ws.temp("in");
  in.blob()->write_at(0, make_records(recs));
  TempFile out = external_sort(ws, in, SortSpec{kWidth, {{0, 4, true}, {4, 8}}});
  std::stable_sort(recs.begin(), recs.end(), [](auto& a, auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<byte_t> got(out.size());
  out.blob()->read_at(0, got);
  CHECK(got == make_records(recs));
}
