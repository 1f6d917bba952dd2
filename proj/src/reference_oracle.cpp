#include "bwtdisk/reference_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bwtdisk {

namespace {

void guard(std::uint64_t N) {
  if (N > kOracleLimit) throw std::length_error("oracle input too large");
}

// Suffix k (1-based) of text + sentinel; the sentinel sorts first, so a
// proper prefix is the smaller suffix.
bool suffix_less(std::span<const byte_t> t, std::uint64_t a, std::uint64_t b) {
  return std::lexicographical_compare(t.begin() + static_cast<std::ptrdiff_t>(a - 1), t.end(),
                                      t.begin() + static_cast<std::ptrdiff_t>(b - 1), t.end());
}

std::vector<std::uint64_t> brute_sa(std::span<const byte_t> t) {
  std::vector<std::uint64_t> sa(t.size() + 1);
  std::iota(sa.begin(), sa.end(), 1);
  std::sort(sa.begin(), sa.end(), [&](std::uint64_t a, std::uint64_t b) { return suffix_less(t, a, b); });
  return sa;
}

std::vector<byte_t> wrap(const char* magic) { return std::vector<byte_t>(magic, magic + 4); }

void append_u64(std::vector<byte_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<byte_t>(v >> (8 * i)));
}

}  // namespace

std::uint64_t OracleResult::primary() const {
  for (std::size_t i = 0; i < bwt.size(); ++i)
    if (bwt[i] == kOracleSentinel) return i;
  throw std::logic_error("oracle bwt has no sentinel");
}

std::vector<byte_t> OracleResult::bwt_payload() const {
  std::vector<byte_t> out;
  for (int c : bwt)
    if (c != kOracleSentinel) out.push_back(static_cast<byte_t>(c));
  return out;
}

OracleResult oracle_all(std::span<const byte_t> text, std::uint64_t d) {
  const std::uint64_t N = text.size() + 1;
  guard(N);
  if (d == 0) throw std::invalid_argument("pos_d step must be positive");
  OracleResult r;
  r.sa = brute_sa(text);
  r.pos.assign(N, 0);
  for (std::uint64_t i = 0; i < N; ++i) r.pos[r.sa[i] - 1] = i + 1;
  r.bwt.resize(N);
  r.psi.resize(N);
  for (std::uint64_t i = 0; i < N; ++i) {
    std::uint64_t p = r.sa[i];
    r.bwt[i] = p == 1 ? kOracleSentinel : text[p - 2];
    std::uint64_t succ = p == N ? 1 : p + 1;
    r.psi[i] = r.pos[succ - 1];
  }
  for (std::uint64_t i = 0; i < N; ++i)
    if (r.sa[i] % d == 0) r.pos_d.emplace_back(i + 1, r.sa[i]);
  return r;
}

GapArray oracle_gap(std::span<const byte_t> old_text, std::span<const byte_t> block) {
  std::vector<byte_t> t(block.begin(), block.end());
  t.insert(t.end(), old_text.begin(), old_text.end());
  const std::uint64_t N = t.size() + 1;
  guard(N);
  const std::uint64_t m = block.size();
  auto sa = brute_sa(t);
  GapArray g;
  g.counts.assign(m + 1, 0);
  std::uint64_t seen_new = 0;
  for (auto p : sa) {
    if (p <= m) {
      ++seen_new;
    } else {
      ++g.counts[seen_new];
    }
  }
  return g;
}

std::vector<bool> oracle_gt(std::span<const byte_t> text, std::uint64_t from) {
  const std::uint64_t N = text.size() + 1;
  guard(N);
  std::vector<bool> gt(N);
  for (std::uint64_t k = 1; k <= N; ++k) gt[k - 1] = suffix_less(text, from, k);
  return gt;
}

std::vector<byte_t> oracle_bwt_file(std::span<const byte_t> text, Codec codec) {
  auto r = oracle_all(text);
  BwtFile f;
  f.header = BwtHeader{codec, text.size(), r.primary()};
  f.payload = r.bwt_payload();
  return serialize_bwt_file(f);
}

std::vector<byte_t> oracle_sa_file(std::span<const byte_t> text) {
  auto r = oracle_all(text);
  auto out = wrap(kSaMagic);
  for (auto p : r.sa) append_u64(out, p - 1);
  return out;
}

std::vector<byte_t> oracle_psi_file(std::span<const byte_t> text) {
  auto r = oracle_all(text);
  auto out = wrap(kPsiMagic);
  append_u64(out, r.psi[0] - 1);
  for (std::size_t i = 1; i < r.psi.size(); ++i)
    put_varint(out, zigzag(static_cast<std::int64_t>(r.psi[i]) - static_cast<std::int64_t>(r.psi[i - 1])));
  return out;
}

std::vector<byte_t> oracle_posd_file(std::span<const byte_t> text, std::uint64_t d) {
  auto r = oracle_all(text, d);
  auto out = wrap(kPosdMagic);
  append_u64(out, d);
  for (auto [rank, pos] : r.pos_d) {
    append_u64(out, rank - 1);
    append_u64(out, pos - 1);
  }
  return out;
}

}  // namespace bwtdisk
