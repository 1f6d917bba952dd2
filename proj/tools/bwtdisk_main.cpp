// bwtdisk: build and invert BWT-family indexes of large files by
// sequential scans.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bwtdisk/bwt_invert.hpp"
#include "bwtdisk/index_builders.hpp"
#include "bwtdisk/reference_oracle.hpp"

namespace {

using namespace bwtdisk;

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

struct Options {
  std::string input;
  std::string output;
  std::uint64_t block_size = kDefaultBlockSize;
  std::string codec;
  std::string layout = "two-file";
  bool internal = false;
  std::uint64_t mem_budget = kDefaultMemoryBudget;
  std::uint64_t d = 1;
  bool naive = false;
  std::string stats;
  std::string temp_dir;
};

void write_stats(const Options& o, const StatsReport& r) {
  if (o.stats.empty()) return;
  std::ofstream f(o.stats, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error("cannot write stats to " + o.stats);
  f << stats_json(r);
}

BuildConfig build_config(const Options& o, Product what) {
  BuildConfig cfg;
  cfg.block_size = o.block_size;
  if (what == Product::bwt) {
    cfg.codec = o.codec.empty() ? Codec::rle : parse_codec(o.codec);
  } else {
    cfg.codec = o.codec.empty() ? Codec::identity : parse_codec(o.codec);
  }
  cfg.mode = o.internal ? Mode::internal : Mode::external;
  if (o.layout == "in-place") {
    cfg.layout = Layout::in_place;
  } else if (o.layout != "two-file") {
    throw std::invalid_argument("unknown layout: " + o.layout);
  }
  cfg.memory_budget = o.mem_budget;
  cfg.d = o.d;
  if (!o.temp_dir.empty()) cfg.temp_dir = o.temp_dir;
  return cfg;
}

int run_build(const Options& o, Product what) {
  auto cfg = build_config(o, what);
  auto in = open_file_blob(o.input, false);
  auto out = open_file_blob(o.output, true);
  auto stats = build(what, in, out, cfg);
  write_stats(o, stats.report());
  return 0;
}

int run_unbwt(const Options& o) {
  auto in = open_file_blob(o.input, false);
  auto out = open_file_blob(o.output, true);
  if (o.naive) {
    auto t0 = std::chrono::steady_clock::now();
    auto text = naive_unbwt(read_bwt_file(*in));
    out->write_at(0, text);
    StatsReport r;
    r.bytes_read = in->size();
    r.bytes_written = text.size();
    r.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
    write_stats(o, r);
    return 0;
  }
  InvertConfig cfg;
  cfg.memory_budget = o.mem_budget;
  cfg.mode = o.internal ? Mode::internal : Mode::external;
  if (!o.temp_dir.empty()) cfg.temp_dir = o.temp_dir;
  auto stats = invert_bwt(in, out, cfg);
  write_stats(o, stats.report());
  return 0;
}

int run_verify(const Options& o) {
  auto in = open_file_blob(o.input, false);
  auto text = read_all(*in);
  if (text.size() + 1 > kOracleLimit) {
    std::cerr << "bwtdisk: verify is limited to inputs below " << kOracleLimit << " bytes\n";
    return kExitUsage;
  }
  BuildConfig cfg = build_config(o, Product::bwt);
  int bad = 0;
  auto check = [&](const char* what, const std::vector<byte_t>& got, const std::vector<byte_t>& want) {
    bool ok = got == want;
    std::cout << (ok ? "ok       " : "MISMATCH ") << what << "\n";
    bad += ok ? 0 : 1;
  };
  auto bwt = build_bytes(Product::bwt, text, cfg);
  check("bwt", bwt, oracle_bwt_file(text, cfg.codec));
  cfg.codec = Codec::identity;
  cfg.layout = Layout::two_file;
  check("sa", build_bytes(Product::sa, text, cfg), oracle_sa_file(text));
  check("psi", build_bytes(Product::psi, text, cfg), oracle_psi_file(text));
  cfg.d = o.d;
  check("posd", build_bytes(Product::posd, text, cfg), oracle_posd_file(text, o.d));
  InvertConfig icfg;
  icfg.memory_budget = o.mem_budget;
  if (!o.temp_dir.empty()) icfg.temp_dir = o.temp_dir;
  check("unbwt", invert_bytes(bwt, icfg), text);
  check("unbwt --naive", naive_unbwt(parse_bwt_file(bwt)), text);
  return bad == 0 ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bwtdisk: disk-friendly BWT, suffix array, Psi and pos_d construction and BWT inversion"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_output) {
    sub->add_option("input", o.input, "input file")->required()->check(CLI::ExistingFile);
    auto* out = sub->add_option("-o,--output", o.output, "output file");
    if (needs_output) out->required();
    sub->add_option("--mem-budget", o.mem_budget, "memory budget in bytes")->transform(CLI::AsSizeValue(false));
    sub->add_option("--stats", o.stats, "write a JSON stats report here");
    sub->add_option("--temp-dir", o.temp_dir, "directory for temporary files");
    sub->add_flag("--internal", o.internal, "keep every intermediate stream in memory");
  };
  auto add_build = [&](CLI::App* sub) {
    add_common(sub, true);
    sub->add_option("--block-size", o.block_size, "block size m in bytes")->transform(CLI::AsSizeValue(false));
    sub->add_option("--codec", o.codec, "identity|rle")->check(CLI::IsMember({"identity", "rle"}));
    sub->add_option("--layout", o.layout, "two-file|in-place")->check(CLI::IsMember({"two-file", "in-place"}));
  };

  auto* bwt = app.add_subcommand("bwt", "build the BWT file");
  add_build(bwt);
  auto* sa = app.add_subcommand("sa", "build the suffix array");
  add_build(sa);
  auto* psi = app.add_subcommand("psi", "build the Psi array");
  add_build(psi);
  auto* posd = app.add_subcommand("posd", "build sampled positions");
  add_build(posd);
  posd->add_option("--d", o.d, "sampling step")->check(CLI::PositiveNumber);
  auto* unbwt = app.add_subcommand("unbwt", "invert a BWT file");
  add_common(unbwt, true);
  unbwt->add_flag("--naive", o.naive, "in-memory LF decoding");
  auto* verify = app.add_subcommand("verify", "compare every builder with brute force on a small file");
  add_build(verify);
  verify->get_option("--output")->required(false);
  verify->add_option("--d", o.d, "sampling step")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*bwt) return run_build(o, Product::bwt);
    if (*sa) return run_build(o, Product::sa);
    if (*psi) return run_build(o, Product::psi);
    if (*posd) return run_build(o, Product::posd);
    if (*unbwt) return run_unbwt(o);
    if (*verify) return run_verify(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bwtdisk: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "bwtdisk: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
