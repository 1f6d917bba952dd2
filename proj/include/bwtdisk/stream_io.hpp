#pragma once

// Sequential-scan storage primitives: blobs, volumes, buffered byte and bit
// streams, codecs and working-space accounting.

#include <bit>
#include <cstddef>
#include <cstring>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bwtdisk {

using byte_t = std::uint8_t;

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Codec : std::uint8_t { identity = 0, rle = 1 };
enum class Direction { forward, backward };

std::string_view codec_name(Codec c);
Codec parse_codec(std::string_view name);

// Working-space and I/O accounting. Temp bytes exclude the input and the
// final output; peak is the running maximum of live.
struct SpaceLedger {
  std::uint64_t live_temp_bytes = 0;
  std::uint64_t peak_temp_bytes = 0;
  std::uint64_t passes = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;
};

// Returns the ledger after applying delta. Throws std::logic_error when the
// live count would go negative (an accounting bug).
SpaceLedger ledger_charge(SpaceLedger ledger, std::int64_t delta);
void charge(SpaceLedger& ledger, std::int64_t delta);

// Random-access byte container. Streams below only ever touch it
// sequentially; the random-access surface exists so one implementation can
// serve both disk files and memory buffers.
class Blob {
 public:
  virtual ~Blob() = default;
  virtual std::uint64_t size() const = 0;
  virtual void read_at(std::uint64_t offset, std::span<byte_t> out) = 0;
  virtual void write_at(std::uint64_t offset, std::span<const byte_t> in) = 0;
  virtual void resize(std::uint64_t n) = 0;
};

class Volume {
 public:
  virtual ~Volume() = default;
  virtual std::shared_ptr<Blob> create(const std::string& name) = 0;
  virtual std::shared_ptr<Blob> open(const std::string& name) = 0;
  virtual bool exists(const std::string& name) const = 0;
  virtual void remove(const std::string& name) = 0;
};

class DiskVolume final : public Volume {
 public:
  explicit DiskVolume(std::filesystem::path root);
  std::shared_ptr<Blob> create(const std::string& name) override;
  std::shared_ptr<Blob> open(const std::string& name) override;
  bool exists(const std::string& name) const override;
  void remove(const std::string& name) override;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path resolve(const std::string& name) const;
  std::filesystem::path root_;
};

class MemoryVolume final : public Volume {
 public:
  std::shared_ptr<Blob> create(const std::string& name) override;
  std::shared_ptr<Blob> open(const std::string& name) override;
  bool exists(const std::string& name) const override;
  void remove(const std::string& name) override;

 private:
  std::map<std::string, std::shared_ptr<Blob>> blobs_;
};

std::shared_ptr<Blob> open_file_blob(const std::filesystem::path& path, bool create);
std::shared_ptr<Blob> make_memory_blob(std::vector<byte_t> bytes = {});

// Wraps a blob so reads and writes are counted in the ledger; when
// `temp` is set, size growth and shrinkage are charged as working space.
std::shared_ptr<Blob> accounted(std::shared_ptr<Blob> inner, SpaceLedger* ledger, bool temp);

// Temporary blob with a run-unique name. Deleted (and discharged from the
// ledger) on destruction, including unwinding.
class TempFile {
 public:
  TempFile(Volume& vol, SpaceLedger& ledger, std::string name);
  TempFile(TempFile&& other) noexcept;
  TempFile& operator=(TempFile&& other) noexcept;
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile();

  const std::shared_ptr<Blob>& blob() const { return blob_; }
  std::uint64_t size() const { return blob_ ? blob_->size() : 0; }
  const std::string& name() const { return name_; }
  void release();

 private:
  Volume* vol_ = nullptr;
  std::shared_ptr<Blob> blob_;
  std::string name_;
};

// Scratch context shared by the builders and the inverter.
class Workspace {
 public:
  Workspace(Volume& vol, SpaceLedger& ledger, std::uint64_t memory_budget);
  TempFile temp(std::string_view tag);
  Volume& volume() { return *vol_; }
  SpaceLedger& ledger() { return *ledger_; }
  std::uint64_t memory_budget() const { return memory_budget_; }

 private:
  Volume* vol_;
  SpaceLedger* ledger_;
  std::uint64_t memory_budget_;
  std::string prefix_;
  std::uint64_t counter_ = 0;
};

inline constexpr std::size_t kStreamBuffer = std::size_t{1} << 20;

// Sequential reader over [begin, end) of a blob. Backward direction
// delivers raw bytes last-first and is only available for identity.
class ByteReader {
 public:
  ByteReader(std::shared_ptr<Blob> blob, Direction dir, Codec codec, std::uint64_t begin,
             std::uint64_t end, std::size_t buffer = kStreamBuffer);
  ByteReader(std::shared_ptr<Blob> blob, Direction dir, Codec codec);

  bool next(byte_t& c) {
    if (codec_ == Codec::identity) return raw_next(c);
    if (run_left_ == 0 && !load_run()) return false;
    --run_left_;
    c = run_byte_;
    ++moved_;
    return true;
  }
  byte_t get();  // throws io_error at end
  std::size_t read(std::span<byte_t> out) {
    if (codec_ == Codec::identity && dir_ == Direction::forward && out.size() <= len_ - pos_) {
      std::memcpy(out.data(), buf_.get() + pos_, out.size());
      pos_ += out.size();
      moved_ += out.size();
      return out.size();
    }
    return read_slow(out);
  }
  std::uint64_t bytes_moved() const { return moved_; }
  Direction direction() const { return dir_; }

 private:
  bool raw_next(byte_t& c) {
    if (pos_ == len_ && !refill()) return false;
    c = buf_[pos_++];
    if (codec_ == Codec::identity) ++moved_;
    return true;
  }
  bool refill();
  bool load_run();
  std::size_t read_slow(std::span<byte_t> out);

  std::shared_ptr<Blob> blob_;
  Direction dir_;
  Codec codec_;
  std::uint64_t begin_, end_;
  std::uint64_t cursor_;  // forward: next offset to fetch; backward: end of unfetched range
  std::unique_ptr<byte_t[]> buf_;
  std::size_t cap_ = 0, len_ = 0;
  std::size_t pos_ = 0;
  std::size_t chunk_;
  std::uint64_t run_left_ = 0;
  byte_t run_byte_ = 0;
  std::uint64_t moved_ = 0;
};

// Sequential appending writer starting at `offset`.
class ByteWriter {
 public:
  ByteWriter(std::shared_ptr<Blob> blob, Codec codec, std::uint64_t offset = 0,
             std::size_t buffer = kStreamBuffer);
  ~ByteWriter();
  ByteWriter(const ByteWriter&) = delete;
  ByteWriter& operator=(const ByteWriter&) = delete;

  void put(byte_t c) {
    ++moved_;
    if (codec_ == Codec::identity) {
      raw_put(c);
      return;
    }
    if (run_len_ != 0 && c == run_byte_) {
      ++run_len_;
      return;
    }
    emit_run();
    run_byte_ = c;
    run_len_ = 1;
  }
  void write(std::span<const byte_t> in) {
    if (codec_ == Codec::identity && buf_.size() + in.size() < chunk_) {
      buf_.insert(buf_.end(), in.begin(), in.end());
      moved_ += in.size();
      return;
    }
    write_slow(in);
  }
  // Flushes pending data; the writer stays usable.
  void flush();
  std::uint64_t bytes_moved() const { return moved_; }
  // Raw offset just past everything written so far (after flush).
  std::uint64_t offset() const { return cursor_ + buf_.size(); }

 private:
  void raw_put(byte_t c) {
    buf_.push_back(c);
    if (buf_.size() >= chunk_) drain();
  }
  void emit_run();
  void drain();
  void write_slow(std::span<const byte_t> in);

  std::shared_ptr<Blob> blob_;
  Codec codec_;
  std::uint64_t cursor_;
  std::vector<byte_t> buf_;
  std::size_t chunk_;
  std::uint64_t run_len_ = 0;
  byte_t run_byte_ = 0;
  std::uint64_t moved_ = 0;
};

ByteReader open_stream(Volume& vol, const std::string& name, Direction dir, Codec codec);

// Codec helpers on whole buffers.
std::vector<byte_t> rle_encode(std::span<const byte_t> payload);
std::vector<byte_t> rle_decode(std::span<const byte_t> encoded);
std::vector<byte_t> encode(Codec c, std::span<const byte_t> payload);
std::vector<byte_t> decode(Codec c, std::span<const byte_t> encoded);

void put_varint(std::vector<byte_t>& out, std::uint64_t v);
void put_varint(ByteWriter& out, std::uint64_t v);
std::uint64_t get_varint(ByteReader& in);
bool try_get_varint(ByteReader& in, std::uint64_t& v);

inline std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}
inline std::int64_t unzigzag(std::uint64_t v) {
  return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
}

inline void store_u64(byte_t* p, std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(p, &v, 8);
  } else {
    for (int i = 0; i < 8; ++i) p[i] = static_cast<byte_t>(v >> (8 * i));
  }
}
inline std::uint64_t load_u64(const byte_t* p) {
  std::uint64_t v = 0;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(&v, p, 8);
  } else {
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return v;
}
inline void put_u64(ByteWriter& out, std::uint64_t v) {
  byte_t b[8];
  store_u64(b, v);
  out.write(b);
}
inline std::uint64_t get_u64(ByteReader& in) {
  byte_t b[8];
  if (in.read(b) != 8) throw io_error("unexpected end of stream");
  return load_u64(b);
}

// LSB-first packed bits.
class BitWriter {
 public:
  explicit BitWriter(ByteWriter& out) : out_(&out) {}
  void put(bool bit) {
    if (bit) acc_ |= static_cast<byte_t>(1u << fill_);
    if (++fill_ == 8) {
      out_->put(acc_);
      acc_ = 0;
      fill_ = 0;
    }
    ++count_;
  }
  void finish();
  std::uint64_t bit_count() const { return count_; }

 private:
  ByteWriter* out_;
  byte_t acc_ = 0;
  unsigned fill_ = 0;
  std::uint64_t count_ = 0;
};

class BitReader {
 public:
  BitReader(ByteReader& in, std::uint64_t bit_count) : in_(&in), left_(bit_count) {}
  bool get();
  std::uint64_t remaining() const { return left_; }

 private:
  ByteReader* in_;
  std::uint64_t left_;
  byte_t acc_ = 0;
  unsigned fill_ = 0;
};

inline std::uint64_t packed_bytes(std::uint64_t bits) { return (bits + 7) / 8; }

// In-place sequential rewrite of a packed bit array: bits are visited in
// increasing index order, each read before it is optionally overwritten;
// bits appended past the old end extend the blob.
class BitRewriter {
 public:
  BitRewriter(std::shared_ptr<Blob> blob, std::uint64_t bit_count, std::size_t chunk_bytes = kStreamBuffer);
  ~BitRewriter();
  BitRewriter(const BitRewriter&) = delete;
  BitRewriter& operator=(const BitRewriter&) = delete;

  // Returns the current bit at the cursor (false past the old end).
  bool peek();
  void set(bool bit);
  void advance() { ++index_; }
  std::uint64_t index() const { return index_; }
  void finish();
  std::uint64_t bit_count() const { return bits_; }

 private:
  void load(std::uint64_t byte_index);
  void store();

  std::shared_ptr<Blob> blob_;
  std::uint64_t bits_;       // logical length, grows with appends
  std::uint64_t old_bits_;
  std::uint64_t index_ = 0;
  std::unique_ptr<byte_t[]> chunk_;  // left uninitialized; see set()
  std::uint64_t chunk_begin_ = 0;  // byte offset of chunk_
  bool loaded_ = false;
  bool dirty_ = false;
  std::size_t chunk_bytes_;
};

}  // namespace bwtdisk
