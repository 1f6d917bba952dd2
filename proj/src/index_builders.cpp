#include "bwtdisk/index_builders.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <stdexcept>

#include "bwtdisk/block_sort.hpp"
#include "bwtdisk/merge_engine.hpp"

namespace bwtdisk {

StatsReport BuildStats::report() const {
  StatsReport r;
  r.passes = ledger.passes;
  r.bytes_read = ledger.bytes_read;
  r.bytes_written = ledger.bytes_written;
  r.peak_temp_bytes = ledger.peak_temp_bytes;
  r.wall_ms = wall_ms;
  return r;
}

std::uint64_t effective_block_size(const BuildConfig& cfg) {
  if (cfg.mode == Mode::internal) return std::max<std::uint64_t>(1, cfg.memory_budget / kInternalBytesPerChar);
  if (cfg.block_size == 0) throw std::invalid_argument("block size must be positive");
  return cfg.block_size;
}

std::uint64_t pass_count(std::uint64_t n, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("block size must be positive");
  return (n + 1 + m - 1) / m;
}

namespace {

struct PassView {
  std::uint64_t start;  // global 1-based position of block position 1
  std::uint64_t total;  // N = n + 1
  bool first;
  bool last;
  const BlockSortResult& res;
  const GapArray& gap;
};

class Payload {
 public:
  virtual ~Payload() = default;
  virtual void on_pass(const PassView& v) = 0;
};

std::shared_ptr<Blob> empty_blob() { return make_memory_blob(); }

void copy_bytes(ByteReader& in, ByteWriter& out, std::uint64_t count) {
  byte_t buf[1 << 14];
  while (count > 0) {
    std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(count, sizeof buf));
    if (in.read(std::span<byte_t>(buf, take)) != take) throw io_error("partial stream shorter than expected");
    out.write(std::span<const byte_t>(buf, take));
    count -= take;
  }
}

// Number of new suffixes preceding old rank v: #{k < m' : prefix[k] < v}.
std::uint64_t new_before(const std::vector<std::uint64_t>& prefix, std::uint64_t v) {
  auto end = prefix.end() - 1;
  return static_cast<std::uint64_t>(std::lower_bound(prefix.begin(), end, v) - prefix.begin());
}

// Merged rank of the new suffix with block rank r (1-based).
std::uint64_t merged_new(const std::vector<std::uint64_t>& prefix, std::uint64_t r) { return r + prefix[r - 1]; }

void drive(const std::shared_ptr<Blob>& input, std::uint64_t m, Workspace& ws, Payload& payload) {
  const std::uint64_t n = input->size();
  const std::uint64_t N = n + 1;
  const std::uint64_t passes = pass_count(n, m);
  TempFile gt = ws.temp("gt");
  std::vector<bool> gt_next;
  bool gt_beyond = false;
  std::uint64_t prev_len = 0;

  for (std::uint64_t h = 1; h <= passes; ++h) {
    const std::uint64_t e = N - (h - 1) * m;
    const std::uint64_t s = e > m ? e - m + 1 : 1;
    const bool last = h == passes;

    BlockContext ctx;
    const std::uint64_t read_end = std::min(e + prev_len, n);
    ctx.text.resize(static_cast<std::size_t>(read_end - (s - 1)));
    input->read_at(s - 1, ctx.text);
    ctx.block_len = static_cast<std::size_t>(e - s + 1);
    ctx.next_len = static_cast<std::size_t>(prev_len);
    ctx.ends_with_sentinel = h <= 2;
    ctx.gt_next = std::move(gt_next);
    ctx.gt_beyond = gt_beyond;
    BlockSortResult res = sort_block(ctx);
    ctx = BlockContext{};
    const std::size_t mb = res.size();

    GapArray gap;
    {
      BitRewriter rw(gt.blob(), h == 1 ? 0 : N - e - 1);
      if (h == 1) {
        gap.counts.assign(mb + 1, 0);
      } else {
        ByteReader back(input, Direction::backward, Codec::identity, e, n);
        GapScan scan = compute_gap_and_gt(back, N - e, rw, res);
        gap = std::move(scan.gap);
        gt_beyond = scan.gt_region_start;
      }
      gt_next = new_block_gt(res);
      if (!last) {
        for (std::size_t p = mb; p >= 2; --p) {
          rw.set(gt_next[p - 2]);
          rw.advance();
        }
      }
      rw.finish();
    }
    prev_len = mb;
    ++ws.ledger().passes;
    payload.on_pass(PassView{s, N, h == 1, last, res, gap});
  }
}

class BwtPayload final : public Payload {
 public:
  BwtPayload(Workspace& ws, std::shared_ptr<Blob> out, std::uint64_t n, Codec codec, Layout layout)
      : ws_(ws), out_(std::move(out)), n_(n), codec_(codec), layout_(layout) {
    if (layout_ == Layout::in_place) {
      if (codec_ != Codec::identity) throw std::invalid_argument("in-place layout requires the identity codec");
      out_->resize(kBwtHeaderSize + n_);
    }
  }

  void on_pass(const PassView& v) override {
    if (layout_ == Layout::in_place) {
      const std::uint64_t base = kBwtHeaderSize + n_;
      const std::uint64_t stored_old = meta_.length == 0 ? 0 : meta_.length - 1;
      const std::uint64_t stored_new = meta_.length + v.res.size() - 1;
      ByteReader old(out_, Direction::forward, Codec::identity, base - stored_old, base);
      ByteWriter w(out_, Codec::identity, base - stored_new);
      meta_ = merge_partial(old, meta_, v.res, v.gap, w);
      w.flush();
    } else {
      std::optional<ByteReader> old;
      if (partial_) {
        old.emplace(partial_->blob(), Direction::forward, codec_);
      } else {
        old.emplace(empty_blob(), Direction::forward, Codec::identity);
      }
      if (v.last) {
        out_->resize(0);
        ByteWriter w(out_, codec_, kBwtHeaderSize);
        meta_ = merge_partial(*old, meta_, v.res, v.gap, w);
        w.flush();
        out_->resize(w.offset());
      } else {
        TempFile next = ws_.temp("bwt");
        {
          ByteWriter w(next.blob(), codec_);
          meta_ = merge_partial(*old, meta_, v.res, v.gap, w);
          w.flush();
        }
        old.reset();
        partial_ = std::move(next);
      }
    }
    if (v.last) {
      write_bwt_header(*out_, BwtHeader{codec_, n_, meta_.hole_pos - 1});
      partial_.reset();
    }
  }

 private:
  Workspace& ws_;
  std::shared_ptr<Blob> out_;
  std::uint64_t n_;
  Codec codec_;
  Layout layout_;
  std::optional<TempFile> partial_;
  PartialBwt meta_;
};

// Shared plumbing for the u64-entry partials (sa, psi, pos_d): the old
// partial is read forward, the new one goes to a temp file or, on the last
// pass, straight into the output.
class WordPayload : public Payload {
 public:
  WordPayload(Workspace& ws, std::shared_ptr<Blob> out) : ws_(ws), out_(std::move(out)) {}

  void on_pass(const PassView& v) override {
    ByteReader old = partial_ ? ByteReader(partial_->blob(), Direction::forward, Codec::identity)
                              : ByteReader(empty_blob(), Direction::forward, Codec::identity);
    if (v.last) {
      out_->resize(0);
      ByteWriter w(out_, Codec::identity);
      merge(v, old, w, true);
      w.flush();
      partial_.reset();
    } else {
      TempFile next = ws_.temp("words");
      {
        ByteWriter w(next.blob(), Codec::identity);
        merge(v, old, w, false);
        w.flush();
      }
      partial_ = std::move(next);
    }
  }

 protected:
  virtual void merge(const PassView& v, ByteReader& old, ByteWriter& out, bool final_pass) = 0;

 private:
  Workspace& ws_;
  std::shared_ptr<Blob> out_;
  std::optional<TempFile> partial_;
};

class SaPayload final : public WordPayload {
 public:
  using WordPayload::WordPayload;

 protected:
  void merge(const PassView& v, ByteReader& old, ByteWriter& out, bool final_pass) override {
    if (final_pass) put_magic(out, kSaMagic);
    const auto& sa = v.res.sa_int;
    for (std::size_t j = 0; j <= sa.size(); ++j) {
      copy_bytes(old, out, v.gap.counts[j] * 8);
      if (j < sa.size()) put_u64(out, v.start + sa[j] - 2);
    }
  }
};

class PsiPayload final : public WordPayload {
 public:
  using WordPayload::WordPayload;

 protected:
  void merge(const PassView& v, ByteReader& old, ByteWriter& out, bool final_pass) override {
    const auto& res = v.res;
    const std::size_t mb = res.size();
    const auto prefix = v.gap.prefix_sums();
    const auto inv = res.inverse();
    std::uint64_t prev = 0;
    bool any = false;
    auto emit = [&](std::uint64_t value) {
      if (!final_pass) {
        put_u64(out, value);
      } else if (!any) {
        put_magic(out, kPsiMagic);
        put_u64(out, value - 1);
      } else {
        put_varint(out, zigzag(static_cast<std::int64_t>(value - prev)));
      }
      prev = value;
      any = true;
    };

    // The old sentinel row pointed at the old full string; it now points
    // at the new block's first position, and the block's last position
    // takes over the old target.
    std::uint64_t block_last_target;
    std::uint64_t old_row = 0;
    std::uint64_t pending = 0;
    bool have_pending = false;
    if (v.first) {
      block_last_target = res.r1;
    } else {
      pending = get_u64(old);
      have_pending = true;
      block_last_target = pending + new_before(prefix, pending);
    }
    for (std::size_t j = 0; j <= mb; ++j) {
      for (std::uint64_t g = v.gap.counts[j]; g > 0; --g) {
        std::uint64_t val = have_pending ? pending : get_u64(old);
        have_pending = false;
        ++old_row;
        emit(old_row == 1 ? merged_new(prefix, res.r1) : val + new_before(prefix, val));
      }
      if (j < mb) {
        std::uint32_t p = res.sa_int[j];
        emit(p < mb ? merged_new(prefix, inv[p + 1]) : block_last_target);
      }
    }
  }
};

class PosdPayload final : public WordPayload {
 public:
  PosdPayload(Workspace& ws, std::shared_ptr<Blob> out, std::uint64_t d) : WordPayload(ws, std::move(out)), d_(d) {
    if (d_ == 0) throw std::invalid_argument("pos_d step must be positive");
  }

 protected:
  void merge(const PassView& v, ByteReader& old, ByteWriter& out, bool final_pass) override {
    const auto& res = v.res;
    const std::size_t mb = res.size();
    const auto prefix = v.gap.prefix_sums();
    const std::uint64_t old_pairs = v.first ? 0 : old_count_;
    std::uint64_t written = 0;
    if (final_pass) {
      put_magic(out, kPosdMagic);
      put_u64(out, d_);
    }
    auto emit = [&](std::uint64_t rank, std::uint64_t pos) {
      put_u64(out, final_pass ? rank - 1 : rank);
      put_u64(out, final_pass ? pos - 1 : pos);
      ++written;
    };

    std::uint64_t consumed = 0;
    std::uint64_t k = 0;  // new suffixes known to precede the current old rank
    auto next_old = [&](std::uint64_t& rank, std::uint64_t& pos) {
      if (consumed == old_pairs) return false;
      std::uint64_t r = get_u64(old);
      pos = get_u64(old);
      while (k < mb && prefix[k] < r) ++k;
      rank = r + k;
      ++consumed;
      return true;
    };
    std::uint64_t orank = 0, opos = 0;
    bool have_old = next_old(orank, opos);
    for (std::size_t j = 1; j <= mb; ++j) {
      std::uint64_t pos = v.start + res.sa_int[j - 1] - 1;
      if (pos % d_ != 0) continue;
      std::uint64_t rank = merged_new(prefix, j);
      while (have_old && orank < rank) {
        emit(orank, opos);
        have_old = next_old(orank, opos);
      }
      emit(rank, pos);
    }
    while (have_old) {
      emit(orank, opos);
      have_old = next_old(orank, opos);
    }
    old_count_ = written;
  }

 private:
  std::uint64_t d_;
  std::uint64_t old_count_ = 0;
};

BuildStats run_build(Product what, const std::shared_ptr<Blob>& input, const std::shared_ptr<Blob>& output,
                     const BuildConfig& cfg, Volume& vol, std::uint64_t m, SpaceLedger& ledger) {
  auto t0 = std::chrono::steady_clock::now();
  BuildStats stats;
  auto in = accounted(input, &ledger, false);
  auto out = accounted(output, &ledger, false);
  stats.n = in->size();
  stats.block_size = m;
  {
    Workspace ws(vol, ledger, cfg.memory_budget);
    std::unique_ptr<Payload> payload;
    switch (what) {
      case Product::bwt:
        payload = std::make_unique<BwtPayload>(ws, out, stats.n, cfg.codec, cfg.layout);
        break;
      case Product::sa:
        payload = std::make_unique<SaPayload>(ws, out);
        break;
      case Product::psi:
        payload = std::make_unique<PsiPayload>(ws, out);
        break;
      case Product::posd:
        payload = std::make_unique<PosdPayload>(ws, out, cfg.d);
        break;
    }
    drive(in, m, ws, *payload);
  }
  stats.ledger = ledger;
  stats.wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  return stats;
}

}  // namespace

BuildStats build(Product what, std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg) {
  if (cfg.mode == Mode::internal) return run_internal_mode(what, std::move(input), std::move(output), cfg);
  if (cfg.layout == Layout::in_place && what != Product::bwt)
    throw std::invalid_argument("in-place layout applies to bwt output only");
  DiskVolume vol(cfg.temp_dir);
  SpaceLedger ledger;
  return run_build(what, input, output, cfg, vol, effective_block_size(cfg), ledger);
}

BuildStats build_bwt(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg) {
  return build(Product::bwt, std::move(input), std::move(output), cfg);
}
BuildStats build_sa(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg) {
  return build(Product::sa, std::move(input), std::move(output), cfg);
}
BuildStats build_psi(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg) {
  return build(Product::psi, std::move(input), std::move(output), cfg);
}
BuildStats build_posd(std::shared_ptr<Blob> input, std::shared_ptr<Blob> output, const BuildConfig& cfg) {
  return build(Product::posd, std::move(input), std::move(output), cfg);
}

BuildStats run_internal_mode(Product what, std::shared_ptr<Blob> input, std::shared_ptr<Blob> output,
                             BuildConfig cfg) {
  cfg.mode = Mode::internal;
  if (cfg.layout == Layout::in_place && what != Product::bwt)
    throw std::invalid_argument("in-place layout applies to bwt output only");
  const std::uint64_t m = effective_block_size(cfg);
  SpaceLedger ledger;
  MemoryVolume vol;
  // The input is pulled into memory once; all later scans hit the buffer.
  auto mem_in = make_memory_blob(read_all(*accounted(input, &ledger, false)));
  auto mem_out = make_memory_blob();
  BuildStats stats = run_build(what, mem_in, mem_out, cfg, vol, m, ledger);
  auto bytes = read_all(*mem_out);
  output->resize(0);
  accounted(output, &ledger, false)->write_at(0, bytes);
  stats.ledger = ledger;
  return stats;
}

std::vector<byte_t> build_bytes(Product what, std::span<const byte_t> text, const BuildConfig& cfg,
                                BuildStats* stats) {
  auto in = make_memory_blob(std::vector<byte_t>(text.begin(), text.end()));
  auto out = make_memory_blob();
  BuildStats s = build(what, in, out, cfg);
  if (stats) *stats = s;
  return read_all(*out);
}

}  // namespace bwtdisk
