// polyquant check|classify|quantize|qr <file> [--k 1..10] [--csv] [--out path]
//
// Exit codes: 0 all verdicts pass, 1 a verdict fails, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "polyquant/commands.hpp"
#include "polyquant/error.hpp"

namespace {

bool is_input_error(polyquant::ErrorCode code) {
  using polyquant::ErrorCode;
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaVersionMismatch:
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConventionMismatch:
      return true;
    default:
      return false;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw polyquant::Error(polyquant::ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact polysymplectic prequantization toolkit"};
  app.require_subcommand(1);
  std::string file;
  std::string k_text;
  bool k_given = false;
  std::string out_path;
  bool csv = false;

  const std::pair<const char*, const char*> commands[] = {
      {"check", "validate a model and run its structural checks"},
      {"classify", "principal lattice and minimal weight classification"},
      {"quantize", "Riemann-Roch table and growth check for a presentation"},
      {"qr", "invariant sections vs reduced quantization for a toric model"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "model file (JSON)")->required();
    sub->add_option("--k", k_text, "k range: a..b, a,b,c or a single value")->each([&](const std::string&) {
      k_given = true;
    });
    sub->add_flag("--csv", csv, "emit tables as CSV instead of the JSON report");
    sub->add_option("--out", out_path, "write the report to a file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    polyquant::CommandOptions options;
    options.seed = polyquant::seed_from_env();
    if (k_given) options.ks = polyquant::parse_k_range(k_text);
    const std::string bytes = read_file(file);
    const polyquant::ModelFile model = polyquant::parse_model(bytes);

    polyquant::RunReport report;
    if (command == "check") report = polyquant::cmd_check(model, bytes, options);
    else if (command == "classify") report = polyquant::cmd_classify(model, bytes, options);
    else if (command == "quantize") report = polyquant::cmd_quantize(model, bytes, options);
    else report = polyquant::cmd_qr(model, bytes, options);

    const std::string text = csv ? report.to_csv() : report.to_json();
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw polyquant::Error(polyquant::ErrorCode::kInvalidArgument, "cannot write " + out_path);
      out << text;
    }
    for (const auto& v : report.verdicts)
      if (!v.pass) std::cerr << "FAIL " << v.name << ": " << v.detail << "\n";
    return report.all_pass() ? 0 : 1;
  } catch (const polyquant::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  }
}
