#include "bwtdisk/bwt_invert.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bwtdisk/block_sort.hpp"
#include "bwtdisk/external_sort.hpp"

namespace bwtdisk {

void store_header(byte_t* p, const Header& h) {
  store_u64(p, h.anchor);
  store_u64(p + 8, h.link);
  store_u64(p + 16, h.order_rank);
  store_u64(p + 24, h.offset);
  p[32] = h.fetched;
  p[33] = h.flags;
}

Header load_header(const byte_t* p) {
  return Header{load_u64(p), load_u64(p + 8), load_u64(p + 16), load_u64(p + 24), p[32], p[33]};
}

std::uint64_t cover_size(std::uint64_t N) {
  if (N <= 2) return 1;
  auto k = static_cast<std::uint64_t>(std::floor(static_cast<double>(N) / std::log2(static_cast<double>(N))));
  return std::clamp<std::uint64_t>(k, 1, N - 1);
}

StatsReport InvertStats::report() const {
  StatsReport r;
  r.rounds = rounds;
  r.bytes_read = ledger.bytes_read;
  r.bytes_written = ledger.bytes_written;
  r.peak_temp_bytes = ledger.peak_temp_bytes;
  r.wall_ms = wall_ms;
  return r;
}

namespace {

constexpr std::size_t kNodeBytes = 16;
constexpr std::size_t kLinkBytes = 32;  // id, ptr, dist, head
constexpr std::size_t kRankedBytes = 24;
constexpr std::size_t kChunkBytes = 128;
constexpr std::size_t kChunkData = 87;  // after head, rank, chunk, anchor, link, len
constexpr std::size_t kGroupBuffer = std::size_t{1} << 20;

class RecordReader {
 public:
  RecordReader(std::shared_ptr<Blob> blob, std::size_t width)
      : in_(std::move(blob), Direction::forward, Codec::identity), rec_(width) {}
  bool next() {
    std::size_t got = in_.read(rec_);
    if (got != 0 && got != rec_.size()) throw io_error("truncated record file");
    return got != 0;
  }
  const byte_t* data() const { return rec_.data(); }
  byte_t* data() { return rec_.data(); }
  std::uint64_t u64(std::size_t off) const { return load_u64(rec_.data() + off); }
  std::span<const byte_t> bytes() const { return rec_; }

 private:
  ByteReader in_;
  std::vector<byte_t> rec_;
};

void put_u32(ByteWriter& w, std::uint32_t v) {
  byte_t b[4] = {static_cast<byte_t>(v), static_cast<byte_t>(v >> 8), static_cast<byte_t>(v >> 16),
                 static_cast<byte_t>(v >> 24)};
  w.write(b);
}

std::uint32_t get_u32(ByteReader& r) {
  byte_t b[4];
  if (r.read(b) != 4) throw io_error("truncated run file");
  return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 | std::uint32_t{b[3]} << 24;
}

std::uint32_t checked_u32(std::uint64_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("substring run exceeds 4 GiB");
  return static_cast<std::uint32_t>(v);
}

// Runs escape 0xFF as FF 00 and carry the sentinel as FF 01.
void put_symbol(ByteWriter& w, std::uint32_t code) {
  if (code == kSentinelCode) {
    w.put(0xFF);
    w.put(0x01);
  } else if (code == 256) {
    w.put(0xFF);
    w.put(0x00);
  } else {
    w.put(static_cast<byte_t>(code - 1));
  }
}

std::uint32_t symbol_bytes(std::uint32_t code) { return code == kSentinelCode || code == 256 ? 2 : 1; }

void copy_bytes(ByteReader& in, ByteWriter& out, std::uint64_t count) {
  byte_t buf[1 << 14];
  while (count > 0) {
    std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(count, sizeof buf));
    if (in.read(std::span<byte_t>(buf, take)) != take) throw io_error("truncated run file");
    out.write(std::span<const byte_t>(buf, take));
    count -= take;
  }
}

// Walks bwt rows 1..N in order, inserting the sentinel row and keeping
// running symbol counts for LF.
class RowScanner {
 public:
  RowScanner(const std::shared_ptr<Blob>& file, const BwtHeader& h)
      : in_(file, Direction::forward, h.codec, kBwtHeaderSize, file->size()), primary_row_(h.primary + 1) {}

  std::uint32_t next() {
    ++row_;
    std::uint32_t c = row_ == primary_row_ ? kSentinelCode : byte_code(in_.get());
    ++seen_[c];
    return c;
  }
  std::uint64_t row() const { return row_; }
  const CountTable& seen() const { return seen_; }

 private:
  ByteReader in_;
  std::uint64_t primary_row_;
  std::uint64_t row_ = 0;
  CountTable seen_{};
};

class Inverter {
 public:
  Inverter(std::shared_ptr<Blob> file, Workspace& ws, const InvertConfig& cfg, InvertStats& stats)
      : file_(std::move(file)), ws_(ws), cfg_(cfg), stats_(stats),
        mark_(ws.temp("mark")), headers_(ws.temp("hdr")), runs_(ws.temp("runs")) {
    h_ = read_bwt_header(*file_);
    N_ = h_.n + 1;
    K_ = cover_size(N_);
    stats_.n = h_.n;
    stats_.K = K_;
  }

  void run(const std::shared_ptr<Blob>& out) {
    count_symbols();
    mark_.blob()->resize(packed_bytes(N_));
    unmarked_ = N_;
    top_up(std::min(K_, N_));
    settle();
    while (!complete_) {
      if (unmarked_ == 0) throw io_error("text fully marked but substrings do not close");
      fetch_round();
      settle();
    }
    finalize(out);
  }

 private:
  void count_symbols() {
    CountTable counts{};
    RowScanner sc(file_, h_);
    for (std::uint64_t r = 0; r < N_; ++r) sc.next();
    counts = sc.seen();
    if (counts[kSentinelCode] != 1) throw io_error("bwt file has no sentinel row");
    C_[0] = 0;
    for (std::size_t c = 0; c < 257; ++c) C_[c + 1] = C_[c] + counts[c];
  }

  void write_header(ByteWriter& w, const Header& h) {
    byte_t rec[kHeaderBytes];
    store_header(rec, h);
    w.write(rec);
  }

  // Opens single-character substrings on the first `want` unmarked rows.
  void top_up(std::uint64_t want) {
    RowScanner sc(file_, h_);
    std::uint64_t made = 0;
    {
      BitRewriter mk(mark_.blob(), N_);
      ByteWriter hw(headers_.blob(), Codec::identity, headers_.size());
      ByteWriter rw(runs_.blob(), Codec::identity, runs_.size());
      while (made < want) {
        if (sc.row() == N_) throw io_error("ran out of unmarked rows");
        std::uint32_t c = sc.next();
        if (!mk.peek()) {
          mk.set(true);
          write_header(hw, Header{sc.row(), lf_step(c, sc.seen(), C_), 0, S_ + made, 0, 0});
          put_u32(rw, symbol_bytes(c));
          put_symbol(rw, c);
          ++made;
        }
        mk.advance();
      }
      mk.finish();
      hw.flush();
      rw.flush();
    }
    S_ += made;
    unmarked_ -= made;
  }

  void fetch_round() {
    RoundInfo info;
    info.headers = S_;
    info.unmarked_before = unmarked_;

    TempFile by_link = external_sort(ws_, headers_, SortSpec{kHeaderBytes, {{8, 8}}});
    TempFile fetched = ws_.temp("hdr");
    {
      RowScanner sc(file_, h_);
      BitRewriter mk(mark_.blob(), N_);
      RecordReader rr(by_link.blob(), kHeaderBytes);
      ByteWriter w(fetched.blob(), Codec::identity);
      std::uint32_t c = 0;
      while (rr.next()) {
        Header hd = load_header(rr.data());
        if (hd.link <= sc.row() && sc.row() != 0) throw io_error("duplicate link among live substrings");
        while (sc.row() < hd.link) c = sc.next();
        while (mk.index() + 1 < hd.link) mk.advance();
        if (mk.peek()) throw io_error("link points into a covered row");
        mk.set(true);
        ++info.new_marks;
        hd.fetched = c == kSentinelCode ? 0 : static_cast<byte_t>(c - 1);
        hd.flags = static_cast<byte_t>(kFetchedValid | (c == kSentinelCode ? kFetchedSentinel : 0));
        hd.link = lf_step(c, sc.seen(), C_);
        write_header(w, hd);
      }
      mk.finish();
    }
    by_link.release();
    TempFile in_order = external_sort(ws_, fetched, SortSpec{kHeaderBytes, {{24, 8}}});
    fetched.release();

    TempFile headers = ws_.temp("hdr");
    TempFile runs = ws_.temp("runs");
    {
      RecordReader hr(in_order.blob(), kHeaderBytes);
      ByteReader rr(runs_.blob(), Direction::forward, Codec::identity);
      ByteWriter hw(headers.blob(), Codec::identity);
      ByteWriter rw(runs.blob(), Codec::identity);
      while (hr.next()) {
        Header hd = load_header(hr.data());
        std::uint32_t code = hd.flags & kFetchedSentinel ? kSentinelCode : byte_code(hd.fetched);
        std::uint32_t len = get_u32(rr);
        put_u32(rw, checked_u32(std::uint64_t{len} + symbol_bytes(code)));
        put_symbol(rw, code);
        copy_bytes(rr, rw, len);
        hd.flags = 0;
        hd.fetched = 0;
        write_header(hw, hd);
      }
    }
    headers_ = std::move(headers);
    runs_ = std::move(runs);
    unmarked_ -= info.new_marks;
    ++stats_.rounds;
    stats_.round_info.push_back(info);
  }

  void settle() {
    merge_adjacent();
    while (!complete_ && S_ < K_ && unmarked_ > 0) {
      top_up(std::min(K_ - S_, unmarked_));
      merge_adjacent();
    }
    if (cfg_.observer) cfg_.observer(snapshot());
  }

  // Joins every maximal chain of adjacent substrings (A.link == B.anchor
  // puts B immediately left of A) into one substring.
  void merge_adjacent() {
    if (complete_) return;
    TempFile by_link = external_sort(ws_, headers_, SortSpec{kHeaderBytes, {{8, 8}}});
    TempFile by_anchor = external_sort(ws_, headers_, SortSpec{kHeaderBytes, {{0, 8}}});
    TempFile ptrs = ws_.temp("ptr");
    TempFile rights = ws_.temp("right");
    std::uint64_t matches = 0;
    std::uint64_t first_x = kNil, first_b = kNil;
    {
      RecordReader lx(by_link.blob(), kHeaderBytes);
      RecordReader ab(by_anchor.blob(), kHeaderBytes);
      ByteWriter pw(ptrs.blob(), Codec::identity);
      ByteWriter rw(rights.blob(), Codec::identity);
      bool have_b = ab.next();
      while (lx.next()) {
        Header x = load_header(lx.data());
        while (have_b && ab.u64(0) < x.link) have_b = ab.next();
        std::uint64_t ptr = kNil;
        if (have_b && ab.u64(0) == x.link) {
          ptr = ab.u64(24);
          put_u64(rw, ptr);
          if (matches++ == 0) {
            first_x = x.offset;
            first_b = ptr;
          }
        }
        put_u64(pw, x.offset);
        put_u64(pw, ptr);
      }
    }
    by_link.release();
    by_anchor.release();
    if (matches == 0) return;

    // Every substring has a left neighbour only once the text is covered;
    // the cycle is then cut at one arbitrary point.
    std::uint64_t cut_x = kNil, cut_b = kNil;
    if (matches == S_) {
      if (unmarked_ != 0) throw io_error("substrings form a cycle before the text is covered");
      cut_x = first_x;
      cut_b = first_b;
      complete_ = true;
      if (S_ == 1) return;
    }

    TempFile ptr_by_id = external_sort(ws_, ptrs, SortSpec{kNodeBytes, {{0, 8}}});
    ptrs.release();
    TempFile right_by_id = external_sort(ws_, rights, SortSpec{8, {{0, 8}}});
    rights.release();

    TempFile nodes = ws_.temp("nodes");
    TempFile roles = ws_.temp("roles");
    {
      RecordReader pr(ptr_by_id.blob(), kNodeBytes);
      RecordReader rr(right_by_id.blob(), 8);
      ByteWriter nw(nodes.blob(), Codec::identity);
      ByteWriter cw(roles.blob(), Codec::identity);
      bool have_r = rr.next();
      while (pr.next()) {
        std::uint64_t id = pr.u64(0);
        std::uint64_t ptr = id == cut_x ? kNil : pr.u64(8);
        bool right = false;
        if (have_r && rr.u64(0) == id) {
          right = id != cut_b;
          have_r = rr.next();
        }
        bool joins = ptr != kNil || right;
        cw.put(joins ? 1 : 0);
        if (joins) {
          put_u64(nw, id);
          put_u64(nw, ptr);
        }
      }
    }
    ptr_by_id.release();
    right_by_id.release();
    TempFile ranked = list_rank(ws_, nodes);
    nodes.release();

    TempFile headers = ws_.temp("hdr");
    TempFile runs = ws_.temp("runs");
    TempFile chunks = ws_.temp("chunks");
    std::uint64_t seq = 0;
    {
      RecordReader hr(headers_.blob(), kHeaderBytes);
      RecordReader kr(ranked.blob(), kRankedBytes);
      ByteReader rr(runs_.blob(), Direction::forward, Codec::identity);
      ByteReader cr(roles.blob(), Direction::forward, Codec::identity);
      ByteWriter hw(headers.blob(), Codec::identity);
      ByteWriter rw(runs.blob(), Codec::identity);
      ByteWriter chw(chunks.blob(), Codec::identity);
      bool have_k = kr.next();
      byte_t rec[kChunkBytes];
      while (hr.next()) {
        Header hd = load_header(hr.data());
        std::uint32_t len = get_u32(rr);
        if (cr.get() == 0) {
          hd.offset = seq++;
          hd.order_rank = 0;
          write_header(hw, hd);
          put_u32(rw, len);
          copy_bytes(rr, rw, len);
          continue;
        }
        if (!have_k || kr.u64(0) != hd.offset) throw io_error("list ranking lost a substring");
        std::uint64_t head = kr.u64(8), rank = kr.u64(16);
        have_k = kr.next();
        std::uint64_t chunk = 0;
        for (std::uint32_t left = len; left > 0; ++chunk) {
          auto take = static_cast<std::uint32_t>(std::min<std::size_t>(left, kChunkData));
          std::fill(std::begin(rec), std::end(rec), byte_t{0});
          store_u64(rec, head);
          store_u64(rec + 8, rank);
          store_u64(rec + 16, chunk);
          store_u64(rec + 24, hd.anchor);
          store_u64(rec + 32, hd.link);
          rec[40] = static_cast<byte_t>(take);
          if (rr.read(std::span<byte_t>(rec + 41, take)) != take) throw io_error("truncated run file");
          chw.write(rec);
          left -= take;
        }
      }
    }
    ranked.release();
    roles.release();

    TempFile sorted = external_sort(ws_, chunks, SortSpec{kChunkBytes, {{0, 8}, {8, 8}, {16, 8}}});
    chunks.release();
    {
      RecordReader cr(sorted.blob(), kChunkBytes);
      ByteWriter hw(headers.blob(), Codec::identity, headers.size());
      ByteWriter rw(runs.blob(), Codec::identity, runs.size());
      std::vector<byte_t> group;
      std::uint64_t group_head = kNil, anchor = 0, link = 0, total = 0, len_at = 0;
      bool spilled = false;
      auto close_group = [&]() {
        if (group_head == kNil) return;
        if (spilled) {
          rw.write(group);
          rw.flush();
          byte_t b[4];
          std::uint32_t v = checked_u32(total);
          for (int i = 0; i < 4; ++i) b[i] = static_cast<byte_t>(v >> (8 * i));
          runs.blob()->write_at(len_at, b);
        } else {
          put_u32(rw, checked_u32(total));
          rw.write(group);
        }
        write_header(hw, Header{anchor, link, 0, seq++, 0, 0});
        group.clear();
        spilled = false;
        total = 0;
      };
      while (cr.next()) {
        std::uint64_t head = cr.u64(0);
        if (head != group_head) {
          close_group();
          group_head = head;
          link = cr.u64(32);
        }
        anchor = cr.u64(24);
        std::size_t take = cr.data()[40];
        group.insert(group.end(), cr.data() + 41, cr.data() + 41 + take);
        total += take;
        if (group.size() >= kGroupBuffer) {
          if (!spilled) {
            len_at = rw.offset();
            put_u32(rw, 0);
            spilled = true;
          }
          rw.write(group);
          group.clear();
        }
      }
      close_group();
    }
    headers_ = std::move(headers);
    runs_ = std::move(runs);
    S_ = seq;
  }

  std::vector<CoverEntry> snapshot() {
    std::vector<CoverEntry> out;
    RecordReader hr(headers_.blob(), kHeaderBytes);
    ByteReader rr(runs_.blob(), Direction::forward, Codec::identity);
    while (hr.next()) {
      Header hd = load_header(hr.data());
      std::uint32_t len = get_u32(rr);
      std::uint64_t chars = 0;
      for (std::uint32_t i = 0; i < len; ++i) {
        byte_t b = rr.get();
        if (b == 0xFF) {
          rr.get();
          ++i;
        }
        ++chars;
      }
      out.push_back(CoverEntry{hd.anchor, hd.link, chars});
    }
    return out;
  }

  void finalize(const std::shared_ptr<Blob>& out) {
    if (S_ != 1) throw io_error("inversion ended with more than one substring");
    std::uint64_t len;
    {
      ByteReader rr(runs_.blob(), Direction::forward, Codec::identity);
      len = get_u32(rr);
    }
    // Locate the sentinel escape, then emit what follows it and what
    // precedes it.
    std::uint64_t at = kNil;
    {
      ByteReader rr(runs_.blob(), Direction::forward, Codec::identity, 4, 4 + len);
      for (std::uint64_t i = 0; i < len; ++i) {
        if (rr.get() != 0xFF) continue;
        if (rr.get() == 0x01) {
          at = i;
          break;
        }
        ++i;
      }
    }
    if (at == kNil) throw io_error("sentinel missing from recovered text");
    out->resize(0);
    ByteWriter w(out, Codec::identity);
    std::uint64_t emitted = 0;
    auto emit_range = [&](std::uint64_t b, std::uint64_t e) {
      ByteReader rr(runs_.blob(), Direction::forward, Codec::identity, 4 + b, 4 + e);
      byte_t c;
      while (rr.next(c)) {
        if (c == 0xFF && rr.get() != 0x00) throw io_error("unexpected escape in recovered text");
        w.put(c);
        ++emitted;
      }
    };
    emit_range(at + 2, len);
    emit_range(0, at);
    w.flush();
    if (emitted != h_.n) throw io_error("recovered text has the wrong length");
  }

  std::shared_ptr<Blob> file_;
  Workspace& ws_;
  const InvertConfig& cfg_;
  InvertStats& stats_;
  BwtHeader h_;
  std::uint64_t N_ = 0;
  std::uint64_t K_ = 0;
  CTable C_{};
  TempFile mark_;
  TempFile headers_;
  TempFile runs_;
  std::uint64_t S_ = 0;
  std::uint64_t unmarked_ = 0;
  bool complete_ = false;
};

}  // namespace

TempFile list_rank(Workspace& ws, const TempFile& nodes) {
  if (nodes.size() % kNodeBytes != 0) throw io_error("list node file has a partial record");
  TempFile cur = ws.temp("lr");
  {
    RecordReader r(nodes.blob(), kNodeBytes);
    ByteWriter w(cur.blob(), Codec::identity);
    while (r.next()) {
      std::uint64_t id = r.u64(0), ptr = r.u64(8);
      put_u64(w, id);
      put_u64(w, ptr);
      put_u64(w, ptr == kNil ? 0 : 1);
      put_u64(w, ptr == kNil ? id : ptr);
    }
  }
  const SortSpec by_id_spec{kLinkBytes, {{0, 8}}};
  for (unsigned iter = 0;; ++iter) {
    TempFile by_id = external_sort(ws, cur, by_id_spec);
    cur.release();
    TempFile next = ws.temp("lr");
    TempFile active = ws.temp("lr");
    std::uint64_t nactive = 0;
    {
      RecordReader r(by_id.blob(), kLinkBytes);
      ByteWriter wn(next.blob(), Codec::identity);
      ByteWriter wa(active.blob(), Codec::identity);
      std::uint64_t prev = kNil;
      while (r.next()) {
        if (prev != kNil && r.u64(0) == prev) throw io_error("duplicate list node id");
        prev = r.u64(0);
        if (r.u64(8) == kNil) {
          wn.write(r.bytes());
        } else {
          wa.write(r.bytes());
          ++nactive;
        }
      }
    }
    if (nactive == 0) {
      TempFile out = ws.temp("ranked");
      RecordReader r(by_id.blob(), kLinkBytes);
      ByteWriter w(out.blob(), Codec::identity);
      while (r.next()) {
        put_u64(w, r.u64(0));
        put_u64(w, r.u64(24));
        put_u64(w, r.u64(16));
      }
      w.flush();
      return out;
    }
    if (iter >= 64) throw io_error("list contains a cycle");
    TempFile by_ptr = external_sort(ws, active, SortSpec{kLinkBytes, {{8, 8}}});
    active.release();
    {
      RecordReader xr(by_ptr.blob(), kLinkBytes);
      RecordReader yr(by_id.blob(), kLinkBytes);
      ByteWriter wn(next.blob(), Codec::identity, next.size());
      bool have_y = yr.next();
      byte_t rec[kLinkBytes];
      while (xr.next()) {
        std::uint64_t target = xr.u64(8);
        while (have_y && yr.u64(0) < target) have_y = yr.next();
        if (!have_y || yr.u64(0) != target) throw io_error("list node points to an absent id");
        store_u64(rec, xr.u64(0));
        store_u64(rec + 8, yr.u64(8));
        store_u64(rec + 16, xr.u64(16) + yr.u64(16));
        store_u64(rec + 24, yr.u64(24));
        wn.write(rec);
      }
    }
    cur = std::move(next);
  }
}

InvertStats invert_bwt(std::shared_ptr<Blob> bwt_file, std::shared_ptr<Blob> out, const InvertConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  InvertStats stats;
  SpaceLedger ledger;
  {
    std::unique_ptr<Volume> vol;
    if (cfg.mode == Mode::internal) {
      vol = std::make_unique<MemoryVolume>();
    } else {
      vol = std::make_unique<DiskVolume>(cfg.temp_dir);
    }
    Workspace ws(*vol, ledger, cfg.memory_budget);
    Inverter inv(accounted(std::move(bwt_file), &ledger, false), ws, cfg, stats);
    inv.run(accounted(std::move(out), &ledger, false));
  }
  stats.ledger = ledger;
  stats.wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  return stats;
}

std::vector<byte_t> invert_bytes(std::span<const byte_t> bwt_file, const InvertConfig& cfg, InvertStats* stats) {
  auto in = make_memory_blob(std::vector<byte_t>(bwt_file.begin(), bwt_file.end()));
  auto out = make_memory_blob();
  InvertStats s = invert_bwt(in, out, cfg);
  if (stats) *stats = std::move(s);
  return read_all(*out);
}

std::vector<byte_t> naive_unbwt(const BwtFile& f) {
  const std::uint64_t n = f.header.n;
  if (f.payload.size() != n) throw io_error("payload length does not match header");
  if (f.header.primary > n) throw io_error("primary index out of range");
  const std::uint64_t N = n + 1;
  std::vector<std::uint32_t> code(N);
  for (std::uint64_t r = 0, k = 0; r < N; ++r)
    code[r] = r == f.header.primary ? kSentinelCode : byte_code(f.payload[k++]);
  CTable C{};
  CountTable counts{};
  for (auto c : code) ++counts[c];
  for (std::size_t c = 0; c < 257; ++c) C[c + 1] = C[c] + counts[c];
  // Row 1 holds the sentinel suffix; its bwt character is the last text
  // character. Walk LF from there, filling the text right to left.
  std::vector<std::uint64_t> lf(N);
  CountTable seen{};
  for (std::uint64_t r = 0; r < N; ++r) {
    ++seen[code[r]];
    lf[r] = lf_step(code[r], seen, C) - 1;
  }
  std::vector<byte_t> text(n);
  std::uint64_t r = 0;
  for (std::uint64_t k = n; k > 0; --k) {
    if (code[r] == kSentinelCode) throw io_error("sentinel reached before the text start");
    text[k - 1] = static_cast<byte_t>(code[r] - 1);
    r = lf[r];
  }
  if (code[r] != kSentinelCode) throw io_error("LF walk did not close at the sentinel");
  return text;
}

}  // namespace bwtdisk
