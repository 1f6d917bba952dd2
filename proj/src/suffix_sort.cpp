#include "bwtdisk/suffix_sort.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bwtdisk {

namespace {

constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kDirectSort = 24;

void bucket_bounds(const std::uint32_t* s, std::uint32_t n, std::vector<std::uint32_t>& bkt, bool ends) {
  std::fill(bkt.begin(), bkt.end(), 0);
  for (std::uint32_t i = 0; i < n; ++i) ++bkt[s[i]];
  std::uint32_t sum = 0;
  for (auto& b : bkt) {
    sum += b;
    b = ends ? sum : sum - b;
  }
}

void induce(const std::uint32_t* s, std::uint32_t* sa, std::uint32_t n, const std::vector<bool>& stype,
            std::vector<std::uint32_t>& bkt) {
  bucket_bounds(s, n, bkt, false);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t p = sa[i];
    if (p != kEmpty && p > 0 && !stype[p - 1]) sa[bkt[s[p - 1]]++] = p - 1;
  }
  bucket_bounds(s, n, bkt, true);
  for (std::uint32_t i = n; i-- > 0;) {
    std::uint32_t p = sa[i];
    if (p != kEmpty && p > 0 && stype[p - 1]) sa[--bkt[s[p - 1]]] = p - 1;
  }
}

void sais(const std::uint32_t* s, std::uint32_t* sa, std::uint32_t n, std::uint32_t alphabet) {
  if (n <= kDirectSort) {
    // bucket setup over a large alphabet costs more than sorting a handful of suffixes
    std::iota(sa, sa + n, 0u);
    std::sort(sa, sa + n, [&](std::uint32_t a, std::uint32_t b) {
      return std::lexicographical_compare(s + a, s + n, s + b, s + n);
    });
    return;
  }
  std::vector<bool> stype(n);
  stype[n - 1] = true;
  for (std::uint32_t i = n - 1; i-- > 0;) stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
  auto is_lms = [&](std::uint32_t i) { return i > 0 && stype[i] && !stype[i - 1]; };

  std::vector<std::uint32_t> bkt(alphabet);
  bucket_bounds(s, n, bkt, true);
  std::fill(sa, sa + n, kEmpty);
  for (std::uint32_t i = 1; i < n; ++i)
    if (is_lms(i)) sa[--bkt[s[i]]] = i;
  induce(s, sa, n, stype, bkt);

  // Compact the sorted LMS positions and name their substrings.
  std::uint32_t n1 = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    if (is_lms(sa[i])) sa[n1++] = sa[i];
  std::fill(sa + n1, sa + n, kEmpty);
  std::uint32_t names = 0;
  std::uint32_t prev = kEmpty;
  for (std::uint32_t i = 0; i < n1; ++i) {
    std::uint32_t pos = sa[i];
    bool diff = prev == kEmpty;
    for (std::uint32_t d = 0; !diff; ++d) {
      if (s[pos + d] != s[prev + d] || stype[pos + d] != stype[prev + d]) {
        diff = true;
      } else if (d > 0 && (is_lms(pos + d) || is_lms(prev + d))) {
        break;
      }
    }
    if (diff) {
      ++names;
      prev = pos;
    }
    sa[n1 + pos / 2] = names - 1;
  }
  for (std::uint32_t i = n, j = n; i-- > n1;)
    if (sa[i] != kEmpty) sa[--j] = sa[i];

  std::uint32_t* s1 = sa + n - n1;
  if (names < n1) {
    sais(s1, sa, n1, names);
  } else {
    for (std::uint32_t i = 0; i < n1; ++i) sa[s1[i]] = i;
  }

  // Place LMS suffixes in final order and induce the rest.
  for (std::uint32_t i = 1, j = 0; i < n; ++i)
    if (is_lms(i)) s1[j++] = i;
  for (std::uint32_t i = 0; i < n1; ++i) sa[i] = s1[sa[i]];
  std::fill(sa + n1, sa + n, kEmpty);
  bucket_bounds(s, n, bkt, true);
  for (std::uint32_t i = n1; i-- > 0;) {
    std::uint32_t p = sa[i];
    sa[i] = kEmpty;
    sa[--bkt[s[p]]] = p;
  }
  induce(s, sa, n, stype, bkt);
}

}  // namespace

std::vector<std::uint32_t> suffix_array_sais(std::span<const std::uint32_t> text, std::uint32_t alphabet_size) {
  if (text.empty()) return {};
  if (text.size() >= kEmpty) throw std::length_error("text too long for 32-bit suffix sorting");
  if (text.back() != 0) throw std::invalid_argument("text must end with the unique symbol 0");
  for (std::size_t i = 0; i + 1 < text.size(); ++i)
    if (text[i] == 0 || text[i] >= alphabet_size) throw std::invalid_argument("symbol out of range");
  std::vector<std::uint32_t> sa(text.size());
  sais(text.data(), sa.data(), static_cast<std::uint32_t>(text.size()), alphabet_size);
  return sa;
}

}  // namespace bwtdisk
