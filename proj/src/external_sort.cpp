#include "bwtdisk/external_sort.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <memory>
#include <queue>
#include <stdexcept>

namespace bwtdisk {

namespace {

constexpr std::size_t kMaxKeys = 3;
using KeyTuple = std::array<std::uint64_t, kMaxKeys>;

KeyTuple extract(const byte_t* rec, const SortSpec& spec) {
  KeyTuple k{};
  for (std::size_t f = 0; f < spec.keys.size(); ++f) {
    const SortKey& key = spec.keys[f];
    std::uint64_t v;
    if (key.width == 8) {
      v = load_u64(rec + key.offset);
    } else {
      v = 0;
      for (std::size_t b = 0; b < key.width; ++b) v |= static_cast<std::uint64_t>(rec[key.offset + b]) << (8 * b);
    }
    k[f] = key.descending ? ~v : v;
  }
  return k;
}

// Stable order of `count` records by key; the index tiebreak keeps equal
// keys in input order.
void sort_order(const byte_t* recs, std::size_t count, const SortSpec& spec, std::vector<std::uint32_t>& perm) {
  const std::size_t width = spec.record_width;
  perm.resize(count);
  if (spec.keys.size() == 1) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = {extract(recs + i * width, spec)[0], static_cast<std::uint32_t>(i)};
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < count; ++i) perm[i] = order[i].second;
    return;
  }
  std::vector<std::pair<KeyTuple, std::uint32_t>> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = {extract(recs + i * width, spec), static_cast<std::uint32_t>(i)};
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < count; ++i) perm[i] = order[i].second;
}

void validate(const SortSpec& spec) {
  if (spec.record_width == 0) throw std::invalid_argument("record width must be positive");
  if (spec.keys.empty() || spec.keys.size() > kMaxKeys) throw std::invalid_argument("1..3 sort keys supported");
  for (const auto& k : spec.keys) {
    if (k.width == 0 || k.width > 8 || k.offset + k.width > spec.record_width)
      throw std::invalid_argument("sort key outside record");
  }
}

struct RunCursor {
  ByteReader reader;
  std::vector<byte_t> rec;
  KeyTuple key{};
  bool live = false;

  bool advance(const SortSpec& spec) {
    live = reader.read(rec) == rec.size();
    if (live) key = extract(rec.data(), spec);
    return live;
  }
};

// Merges `inputs` (each sorted) into `out`; ties go to the lower input index.
void merge_runs(std::vector<std::shared_ptr<Blob>>& inputs, ByteWriter& out, const SortSpec& spec,
                std::size_t buffer) {
  std::vector<RunCursor> cur;
  cur.reserve(inputs.size());
  for (auto& b : inputs) {
    cur.push_back(RunCursor{ByteReader(b, Direction::forward, Codec::identity, 0, b->size(), buffer),
                            std::vector<byte_t>(spec.record_width), {}, false});
    cur.back().advance(spec);
  }
  auto greater = [&](std::size_t a, std::size_t b) {
    if (cur[a].key != cur[b].key) return cur[a].key > cur[b].key;
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < cur.size(); ++i)
    if (cur[i].live) heap.push(i);
  while (!heap.empty()) {
    std::size_t i = heap.top();
    heap.pop();
    out.write(cur[i].rec);
    if (cur[i].advance(spec)) heap.push(i);
  }
}

}  // namespace

SortReport external_sort(Workspace& ws, ByteReader& in, ByteWriter& out, const SortSpec& spec) {
  validate(spec);
  const std::size_t width = spec.record_width;
  const std::uint64_t budget = ws.memory_budget();
  if (budget < 2 * width) throw std::invalid_argument("sort memory budget below two records");

  const std::size_t per_record = width + sizeof(KeyTuple) + sizeof(std::uint32_t);
  const std::size_t capacity = std::max<std::size_t>(2, static_cast<std::size_t>(budget / per_record));

  SortReport report;
  std::vector<TempFile> runs;
  std::unique_ptr<byte_t[]> buf;
  std::size_t cap = 0, len = 0;
  std::vector<std::uint32_t> perm;

  const std::size_t limit = capacity * width;
  const std::size_t first_step = std::max<std::size_t>(width, (std::size_t{1} << 16) / width * width);
  auto fill = [&]() {
    len = 0;
    while (len < limit) {
      if (len == cap) {
        std::size_t grown = std::min(limit, cap + std::max(cap, first_step));
        auto bigger = std::make_unique_for_overwrite<byte_t[]>(grown);
        std::memcpy(bigger.get(), buf.get(), len);
        buf = std::move(bigger);
        cap = grown;
      }
      std::size_t r = in.read(std::span<byte_t>(buf.get() + len, std::min(cap, limit) - len));
      if (r == 0) break;
      len += r;
    }
    if (len % width != 0) throw io_error("record stream length is not a multiple of the record width");
    return len / width;
  };
  auto emit = [&](ByteWriter& w) {
    for (auto idx : perm) w.write(std::span<const byte_t>(buf.get() + std::size_t{idx} * width, width));
  };

  for (std::size_t count = fill(); count > 0;) {
    report.records += count;
    sort_order(buf.get(), count, spec, perm);

    const bool last = len < limit;
    if (runs.empty() && last) {
      emit(out);
      out.flush();
      report.runs = 1;
      return report;
    }
    TempFile run = ws.temp("run");
    {
      ByteWriter w(run.blob(), Codec::identity);
      emit(w);
    }
    runs.push_back(std::move(run));
    count = last ? 0 : fill();
  }

  report.runs = runs.size();
  if (runs.empty()) {
    out.flush();
    return report;
  }

  const std::size_t fanin = static_cast<std::size_t>(std::clamp<std::uint64_t>(budget / (2 * width), 3, 257) - 1);
  while (runs.size() > fanin) {
    ++report.merge_levels;
    std::vector<TempFile> next;
    const std::size_t buffer = static_cast<std::size_t>(std::max<std::uint64_t>(width, budget / (fanin + 1)));
    for (std::size_t g = 0; g < runs.size(); g += fanin) {
      std::size_t end = std::min(runs.size(), g + fanin);
      std::vector<std::shared_ptr<Blob>> group;
      for (std::size_t i = g; i < end; ++i) group.push_back(runs[i].blob());
      TempFile merged = ws.temp("merge");
      {
        ByteWriter w(merged.blob(), Codec::identity, 0, buffer);
        merge_runs(group, w, spec, buffer);
      }
      for (std::size_t i = g; i < end; ++i) runs[i].release();
      next.push_back(std::move(merged));
    }
    runs = std::move(next);
  }
  ++report.merge_levels;
  std::vector<std::shared_ptr<Blob>> group;
  for (auto& r : runs) group.push_back(r.blob());
  const std::size_t buffer = static_cast<std::size_t>(std::max<std::uint64_t>(width, budget / (runs.size() + 1)));
  merge_runs(group, out, spec, buffer);
  out.flush();
  return report;
}

TempFile external_sort(Workspace& ws, const TempFile& input, const SortSpec& spec, SortReport* report) {
  TempFile sorted = ws.temp("sorted");
  ByteReader in(input.blob(), Direction::forward, Codec::identity);
  ByteWriter out(sorted.blob(), Codec::identity);
  SortReport r = external_sort(ws, in, out, spec);
  if (report) *report = r;
  return sorted;
}

}  // namespace bwtdisk
