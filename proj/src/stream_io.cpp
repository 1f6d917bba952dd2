#include "bwtdisk/stream_io.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <system_error>

namespace bwtdisk {

std::string_view codec_name(Codec c) { return c == Codec::rle ? "rle" : "identity"; }

Codec parse_codec(std::string_view name) {
  if (name == "identity") return Codec::identity;
  if (name == "rle") return Codec::rle;
  throw std::invalid_argument("unknown codec: " + std::string(name));
}

SpaceLedger ledger_charge(SpaceLedger ledger, std::int64_t delta) {
  charge(ledger, delta);
  return ledger;
}

void charge(SpaceLedger& ledger, std::int64_t delta) {
  if (delta < 0 && static_cast<std::uint64_t>(-delta) > ledger.live_temp_bytes)
    throw std::logic_error("space ledger: live temp bytes would go negative");
  ledger.live_temp_bytes = static_cast<std::uint64_t>(static_cast<std::int64_t>(ledger.live_temp_bytes) + delta);
  ledger.peak_temp_bytes = std::max(ledger.peak_temp_bytes, ledger.live_temp_bytes);
}

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw io_error(what + ": " + std::strerror(errno));
}

class FileBlob final : public Blob {
 public:
  FileBlob(const std::filesystem::path& path, bool create) : path_(path) {
    int flags = O_RDWR | O_CLOEXEC;
    if (create) flags |= O_CREAT | O_TRUNC;
    fd_ = ::open(path.c_str(), flags, 0644);
    if (fd_ < 0 && !create && errno == EACCES) fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw_errno("cannot open " + path.string());
    struct stat st {};
    if (::fstat(fd_, &st) != 0) throw_errno("stat " + path.string());
    size_ = static_cast<std::uint64_t>(st.st_size);
  }
  ~FileBlob() override {
    if (fd_ >= 0) ::close(fd_);
  }

  std::uint64_t size() const override { return size_; }

  void read_at(std::uint64_t offset, std::span<byte_t> out) override {
    if (offset + out.size() > size_) throw io_error("read past end of " + path_.string());
    std::size_t done = 0;
    while (done < out.size()) {
      ssize_t r = ::pread(fd_, out.data() + done, out.size() - done, static_cast<off_t>(offset + done));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw_errno("read " + path_.string());
      }
      if (r == 0) throw io_error("unexpected end of " + path_.string());
      done += static_cast<std::size_t>(r);
    }
  }

  void write_at(std::uint64_t offset, std::span<const byte_t> in) override {
    std::size_t done = 0;
    while (done < in.size()) {
      ssize_t r = ::pwrite(fd_, in.data() + done, in.size() - done, static_cast<off_t>(offset + done));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw_errno("write " + path_.string());
      }
      done += static_cast<std::size_t>(r);
    }
    size_ = std::max<std::uint64_t>(size_, offset + in.size());
  }

  void resize(std::uint64_t n) override {
    if (::ftruncate(fd_, static_cast<off_t>(n)) != 0) throw_errno("truncate " + path_.string());
    size_ = n;
  }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

class MemoryBlob final : public Blob {
 public:
  explicit MemoryBlob(std::vector<byte_t> bytes) : bytes_(std::move(bytes)) {}
  std::uint64_t size() const override { return bytes_.size(); }
  void read_at(std::uint64_t offset, std::span<byte_t> out) override {
    if (offset + out.size() > bytes_.size()) throw io_error("read past end of memory blob");
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(offset), out.size(), out.begin());
  }
  void write_at(std::uint64_t offset, std::span<const byte_t> in) override {
    if (offset + in.size() > bytes_.size()) bytes_.resize(offset + in.size());
    std::copy(in.begin(), in.end(), bytes_.begin() + static_cast<std::ptrdiff_t>(offset));
  }
  void resize(std::uint64_t n) override {
    bytes_.resize(n);
    bytes_.shrink_to_fit();
  }

 private:
  std::vector<byte_t> bytes_;
};

class AccountedBlob final : public Blob {
 public:
  AccountedBlob(std::shared_ptr<Blob> inner, SpaceLedger* ledger, bool temp)
      : inner_(std::move(inner)), ledger_(ledger), temp_(temp) {
    if (temp_ && ledger_) charge(*ledger_, static_cast<std::int64_t>(inner_->size()));
    charged_ = temp_ ? inner_->size() : 0;
  }
  ~AccountedBlob() override = default;

  std::uint64_t size() const override { return inner_->size(); }
  void read_at(std::uint64_t offset, std::span<byte_t> out) override {
    inner_->read_at(offset, out);
    if (ledger_) ledger_->bytes_read += out.size();
  }
  void write_at(std::uint64_t offset, std::span<const byte_t> in) override {
    inner_->write_at(offset, in);
    if (ledger_) ledger_->bytes_written += in.size();
    settle();
  }
  void resize(std::uint64_t n) override {
    inner_->resize(n);
    settle();
  }
  // Drops the charge when the underlying storage is removed.
  void discharge() {
    if (temp_ && ledger_ && charged_ != 0) charge(*ledger_, -static_cast<std::int64_t>(charged_));
    charged_ = 0;
    temp_ = false;
  }

 private:
  void settle() {
    if (!temp_ || !ledger_) return;
    std::uint64_t now = inner_->size();
    if (now != charged_) {
      charge(*ledger_, static_cast<std::int64_t>(now) - static_cast<std::int64_t>(charged_));
      charged_ = now;
    }
  }

  std::shared_ptr<Blob> inner_;
  SpaceLedger* ledger_;
  bool temp_;
  std::uint64_t charged_ = 0;
};

}  // namespace

std::shared_ptr<Blob> open_file_blob(const std::filesystem::path& path, bool create) {
  return std::make_shared<FileBlob>(path, create);
}

std::shared_ptr<Blob> make_memory_blob(std::vector<byte_t> bytes) {
  return std::make_shared<MemoryBlob>(std::move(bytes));
}

std::shared_ptr<Blob> accounted(std::shared_ptr<Blob> inner, SpaceLedger* ledger, bool temp) {
  return std::make_shared<AccountedBlob>(std::move(inner), ledger, temp);
}

DiskVolume::DiskVolume(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (!std::filesystem::is_directory(root_)) throw io_error("not a directory: " + root_.string());
}

std::filesystem::path DiskVolume::resolve(const std::string& name) const { return root_ / name; }

std::shared_ptr<Blob> DiskVolume::create(const std::string& name) { return open_file_blob(resolve(name), true); }

std::shared_ptr<Blob> DiskVolume::open(const std::string& name) {
  auto p = resolve(name);
  if (!std::filesystem::exists(p)) throw io_error("missing file: " + p.string());
  return open_file_blob(p, false);
}

bool DiskVolume::exists(const std::string& name) const { return std::filesystem::exists(resolve(name)); }

void DiskVolume::remove(const std::string& name) {
  std::error_code ec;
  std::filesystem::remove(resolve(name), ec);
}

std::shared_ptr<Blob> MemoryVolume::create(const std::string& name) {
  auto b = make_memory_blob();
  blobs_[name] = b;
  return b;
}

std::shared_ptr<Blob> MemoryVolume::open(const std::string& name) {
  auto it = blobs_.find(name);
  if (it == blobs_.end()) throw io_error("missing blob: " + name);
  return it->second;
}

bool MemoryVolume::exists(const std::string& name) const { return blobs_.count(name) != 0; }

void MemoryVolume::remove(const std::string& name) {
  auto it = blobs_.find(name);
  if (it == blobs_.end()) return;
  it->second->resize(0);
  blobs_.erase(it);
}

TempFile::TempFile(Volume& vol, SpaceLedger& ledger, std::string name) : vol_(&vol), name_(std::move(name)) {
  blob_ = accounted(vol.create(name_), &ledger, true);
}

TempFile::TempFile(TempFile&& other) noexcept
    : vol_(other.vol_), blob_(std::move(other.blob_)), name_(std::move(other.name_)) {
  other.vol_ = nullptr;
}

TempFile& TempFile::operator=(TempFile&& other) noexcept {
  if (this != &other) {
    release();
    vol_ = other.vol_;
    blob_ = std::move(other.blob_);
    name_ = std::move(other.name_);
    other.vol_ = nullptr;
  }
  return *this;
}

TempFile::~TempFile() { release(); }

void TempFile::release() {
  if (!vol_ || !blob_) return;
  static_cast<AccountedBlob&>(*blob_).discharge();
  blob_.reset();
  vol_->remove(name_);
  vol_ = nullptr;
}

namespace {
std::atomic<std::uint64_t> g_workspace_serial{0};
}

Workspace::Workspace(Volume& vol, SpaceLedger& ledger, std::uint64_t memory_budget)
    : vol_(&vol), ledger_(&ledger), memory_budget_(memory_budget) {
  prefix_ = "bwtdisk-" + std::to_string(::getpid()) + "-" + std::to_string(g_workspace_serial++) + "-";
}

TempFile Workspace::temp(std::string_view tag) {
  return TempFile(*vol_, *ledger_, prefix_ + std::to_string(counter_++) + "-" + std::string(tag));
}

// ---------------------------------------------------------------------------

ByteReader::ByteReader(std::shared_ptr<Blob> blob, Direction dir, Codec codec, std::uint64_t begin,
                       std::uint64_t end, std::size_t buffer)
    : blob_(std::move(blob)), dir_(dir), codec_(codec), begin_(begin), end_(end), chunk_(std::max<std::size_t>(buffer, 16)) {
  if (dir == Direction::backward && codec != Codec::identity)
    throw std::invalid_argument("backward streams require the identity codec");
  if (begin_ > end_ || end_ > blob_->size()) throw io_error("stream range outside blob");
  cursor_ = dir == Direction::forward ? begin_ : end_;
}

ByteReader::ByteReader(std::shared_ptr<Blob> blob, Direction dir, Codec codec)
    : ByteReader(blob, dir, codec, 0, blob->size()) {}

bool ByteReader::refill() {
  std::uint64_t avail = dir_ == Direction::forward ? end_ - cursor_ : cursor_ - begin_;
  if (avail == 0) return false;
  std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(avail, chunk_));
  if (cap_ < take) {
    buf_.reset(new byte_t[take]);
    cap_ = take;
  }
  len_ = take;
  std::span<byte_t> view(buf_.get(), take);
  if (dir_ == Direction::forward) {
    blob_->read_at(cursor_, view);
    cursor_ += take;
  } else {
    cursor_ -= take;
    blob_->read_at(cursor_, view);
    std::reverse(view.begin(), view.end());
  }
  pos_ = 0;
  return true;
}

bool ByteReader::load_run() {
  std::uint64_t len = 0;
  unsigned shift = 0;
  byte_t b;
  for (;;) {
    if (!raw_next(b)) {
      if (shift != 0) throw io_error("truncated rle run length");
      return false;
    }
    if (shift > 63) throw io_error("rle run length overflow");
    len |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    shift += 7;
    if ((b & 0x80) == 0) break;
  }
  if (!raw_next(run_byte_)) throw io_error("truncated rle run");
  if (len == 0) throw io_error("empty rle run");
  run_left_ = len;
  return true;
}

byte_t ByteReader::get() {
  byte_t c;
  if (!next(c)) throw io_error("unexpected end of stream");
  return c;
}

std::size_t ByteReader::read_slow(std::span<byte_t> out) {
  std::size_t n = 0;
  if (codec_ == Codec::identity && dir_ == Direction::forward) {
    while (n < out.size()) {
      if (pos_ == len_ && !refill()) break;
      std::size_t take = std::min(out.size() - n, len_ - pos_);
      std::memcpy(out.data() + n, buf_.get() + pos_, take);
      pos_ += take;
      n += take;
    }
    moved_ += n;
    return n;
  }
  byte_t c;
  while (n < out.size() && next(c)) out[n++] = c;
  return n;
}

ByteWriter::ByteWriter(std::shared_ptr<Blob> blob, Codec codec, std::uint64_t offset, std::size_t buffer)
    : blob_(std::move(blob)), codec_(codec), cursor_(offset), chunk_(std::max<std::size_t>(buffer, 16)) {
  buf_.reserve(chunk_);
}

ByteWriter::~ByteWriter() {
  try {
    flush();
  } catch (...) {
  }
}

void ByteWriter::write_slow(std::span<const byte_t> in) {
  if (codec_ == Codec::identity) {
    moved_ += in.size();
    std::size_t i = 0;
    while (i < in.size()) {
      std::size_t take = std::min(in.size() - i, chunk_ - buf_.size());
      buf_.insert(buf_.end(), in.begin() + static_cast<std::ptrdiff_t>(i),
                  in.begin() + static_cast<std::ptrdiff_t>(i + take));
      i += take;
      if (buf_.size() >= chunk_) drain();
    }
    return;
  }
  for (byte_t c : in) put(c);
}

void ByteWriter::emit_run() {
  if (run_len_ == 0) return;
  std::uint64_t v = run_len_;
  while (v >= 0x80) {
    raw_put(static_cast<byte_t>(v | 0x80));
    v >>= 7;
  }
  raw_put(static_cast<byte_t>(v));
  raw_put(run_byte_);
  run_len_ = 0;
}

void ByteWriter::drain() {
  if (buf_.empty()) return;
  blob_->write_at(cursor_, buf_);
  cursor_ += buf_.size();
  buf_.clear();
}

void ByteWriter::flush() {
  emit_run();
  drain();
}

ByteReader open_stream(Volume& vol, const std::string& name, Direction dir, Codec codec) {
  if (dir == Direction::backward && codec != Codec::identity)
    throw std::invalid_argument("backward streams require the identity codec");
  return ByteReader(vol.open(name), dir, codec);
}

std::vector<byte_t> rle_encode(std::span<const byte_t> payload) {
  std::vector<byte_t> out;
  std::size_t i = 0;
  while (i < payload.size()) {
    std::size_t j = i + 1;
    while (j < payload.size() && payload[j] == payload[i]) ++j;
    put_varint(out, j - i);
    out.push_back(payload[i]);
    i = j;
  }
  return out;
}

std::vector<byte_t> rle_decode(std::span<const byte_t> encoded) {
  auto blob = make_memory_blob(std::vector<byte_t>(encoded.begin(), encoded.end()));
  ByteReader in(blob, Direction::forward, Codec::rle);
  std::vector<byte_t> out;
  byte_t c;
  while (in.next(c)) out.push_back(c);
  return out;
}

std::vector<byte_t> encode(Codec c, std::span<const byte_t> payload) {
  if (c == Codec::rle) return rle_encode(payload);
  return {payload.begin(), payload.end()};
}

std::vector<byte_t> decode(Codec c, std::span<const byte_t> encoded) {
  if (c == Codec::rle) return rle_decode(encoded);
  return {encoded.begin(), encoded.end()};
}

void put_varint(std::vector<byte_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<byte_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<byte_t>(v));
}

void put_varint(ByteWriter& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.put(static_cast<byte_t>(v | 0x80));
    v >>= 7;
  }
  out.put(static_cast<byte_t>(v));
}

bool try_get_varint(ByteReader& in, std::uint64_t& v) {
  v = 0;
  unsigned shift = 0;
  byte_t b;
  for (;;) {
    if (!in.next(b)) {
      if (shift != 0) throw io_error("truncated varint");
      return false;
    }
    if (shift > 63) throw io_error("varint overflow");
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    shift += 7;
    if ((b & 0x80) == 0) return true;
  }
}

std::uint64_t get_varint(ByteReader& in) {
  std::uint64_t v;
  if (!try_get_varint(in, v)) throw io_error("unexpected end of stream");
  return v;
}

void BitWriter::finish() {
  if (fill_ != 0) out_->put(acc_);
  acc_ = 0;
  fill_ = 0;
}

bool BitReader::get() {
  if (left_ == 0) throw io_error("bit stream exhausted");
  if (fill_ == 0) {
    acc_ = in_->get();
    fill_ = 8;
  }
  bool bit = acc_ & 1;
  acc_ >>= 1;
  --fill_;
  --left_;
  return bit;
}

BitRewriter::BitRewriter(std::shared_ptr<Blob> blob, std::uint64_t bit_count, std::size_t chunk_bytes)
    : blob_(std::move(blob)), bits_(bit_count), old_bits_(bit_count), chunk_bytes_(std::max<std::size_t>(chunk_bytes, 1)) {
  if (blob_->size() < packed_bytes(bit_count)) throw io_error("bit array shorter than declared");
}

BitRewriter::~BitRewriter() {
  try {
    finish();
  } catch (...) {
  }
}

void BitRewriter::load(std::uint64_t byte_index) {
  store();
  chunk_begin_ = byte_index - byte_index % chunk_bytes_;
  std::uint64_t have = packed_bytes(bits_);
  // bytes past `have` are cleared by set() when first reached
  if (!chunk_) chunk_.reset(new byte_t[chunk_bytes_]);
  if (chunk_begin_ < have) {
    std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(chunk_bytes_, have - chunk_begin_));
    blob_->read_at(chunk_begin_, std::span<byte_t>(chunk_.get(), n));
  }
  loaded_ = true;
}

void BitRewriter::store() {
  if (!loaded_ || !dirty_) return;
  std::uint64_t need = packed_bytes(bits_);
  if (need > chunk_begin_) {
    std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(chunk_bytes_, need - chunk_begin_));
    blob_->write_at(chunk_begin_, std::span<const byte_t>(chunk_.get(), n));
  }
  dirty_ = false;
}

bool BitRewriter::peek() {
  if (index_ >= old_bits_) return false;
  std::uint64_t b = index_ / 8;
  if (!loaded_ || b < chunk_begin_ || b >= chunk_begin_ + chunk_bytes_) load(b);
  return (chunk_[b - chunk_begin_] >> (index_ % 8)) & 1;
}

void BitRewriter::set(bool bit) {
  std::uint64_t b = index_ / 8;
  if (!loaded_ || b < chunk_begin_ || b >= chunk_begin_ + chunk_bytes_) load(b);
  std::uint64_t fresh = std::max(packed_bytes(bits_), chunk_begin_);
  if (b >= fresh)
    std::fill(chunk_.get() + (fresh - chunk_begin_), chunk_.get() + (b - chunk_begin_ + 1), byte_t{0});
  byte_t mask = static_cast<byte_t>(1u << (index_ % 8));
  byte_t& cell = chunk_[b - chunk_begin_];
  cell = bit ? (cell | mask) : (cell & static_cast<byte_t>(~mask));
  if (index_ >= bits_) bits_ = index_ + 1;
  dirty_ = true;
}

void BitRewriter::finish() {
  store();
  old_bits_ = bits_;
}

}  // namespace bwtdisk
