#pragma once

// Command implementations behind the polyquant CLI. Each returns a RunReport whose
// tables and verdicts depend only on the input bytes and the seed.

#include <cstdint>
#include <string>
#include <vector>

#include "polyquant/io.hpp"

namespace polyquant {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::string input_digest;  // sha256 of the input bytes
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
  double elapsed_ms = 0.0;

  bool all_pass() const;
  /// sha256 of the canonical tables, verdicts and notes (timing excluded).
  std::string result_digest() const;
  std::string to_json() const;
  /// Tables only, each preceded by a "# name" line.
  std::string to_csv() const;
};

struct CommandOptions {
  std::vector<long> ks;  // empty: use the file's k list, else 1..10
  std::uint64_t seed = 0;
};

/// Parses "a..b", "a,b,c" or a single integer. Throws kConfigInvalid.
std::vector<long> parse_k_range(const std::string& text);

/// Seed from POLYQUANT_SEED, or the fallback.
std::uint64_t seed_from_env(std::uint64_t fallback = 20240611);

RunReport cmd_check(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options);
RunReport cmd_classify(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options);
RunReport cmd_quantize(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options);
RunReport cmd_qr(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options);

}  // namespace polyquant
