#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bwtdisk/stream_io.hpp"

namespace bwtdisk::testing {

inline std::vector<byte_t> bytes(std::string_view s) { return std::vector<byte_t>(s.begin(), s.end()); }

// Uniform text over the first `sigma` letters starting at `base`.
inline std::vector<byte_t> random_text(std::mt19937_64& rng, std::size_t n, unsigned sigma, byte_t base = 'a') {
  std::uniform_int_distribution<unsigned> pick(0, sigma - 1);
  std::vector<byte_t> t(n);
  for (auto& c : t) c = static_cast<byte_t>(base + pick(rng));
  return t;
}

inline std::vector<byte_t> repeat(const std::vector<byte_t>& w, std::size_t times) {
  std::vector<byte_t> t;
  t.reserve(w.size() * times);
  for (std::size_t i = 0; i < times; ++i) t.insert(t.end(), w.begin(), w.end());
  return t;
}

inline std::vector<byte_t> fibonacci_word(std::size_t n) {
  std::string a = "a", b = "ab";
  while (b.size() < n) {
    std::string c = b + a;
    a = std::move(b);
    b = std::move(c);
  }
  return bytes(std::string_view(b).substr(0, n));
}

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("bwtdisk-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace bwtdisk::testing
