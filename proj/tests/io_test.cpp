#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyquant/commands.hpp"
#include "polyquant/io.hpp"

using namespace polyquant;
namespace fs = std::filesystem;

namespace {

const fs::path kModels = POLYQUANT_MODELS_DIR;

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(POLYQUANT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::kInvalidArgument;
}

struct CliCase {
  const char* command;
  const char* file;
  int exit_code;
};

}  // namespace

TEST(Serialization, EveryShippedModelRoundTrips) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(kModels)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    SCOPED_TRACE(entry.path().filename().string());
    ModelFile m = load_model(entry.path().string());
    std::string once = emit_model(m);
    ModelFile again = parse_model(once);
    EXPECT_EQ(again, m);
    EXPECT_EQ(emit_model(again), once);
  }
  EXPECT_GE(seen, 15u);
}

TEST(Serialization, RationalsAndGaussianEntries) {
  auto m = parse_model(R"({"schema_version":"1","kind":"rep","payload":{"dim_v":1,
    "generators":[[[["0","1/2"],"1"],[["-1","0"],["0","-3/4"]]]]}})");
  const auto& rep = std::get<RepFile>(m.payload);
  ASSERT_EQ(rep.generators.size(), 1u);
  EXPECT_EQ(rep.generators[0](0, 0), GaussianRational(Rational(0), Rational(1, 2)));
  EXPECT_EQ(rep.generators[0](0, 1), GaussianRational(Rational(1)));
  EXPECT_EQ(rep.degree_cap, 4);
  EXPECT_EQ(parse_model(emit_model(m)), m);
}

TEST(Serialization, Errors) {
  EXPECT_EQ(parse_error("{"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error(R"({"schema_version":"2","kind":"lattice","payload":{"dim_v":1,"periods":[]}})"),
            ErrorCode::kSchemaVersionMismatch);
  EXPECT_EQ(parse_error(R"({"schema_version":"1","kind":"bogus","payload":{}})"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error(R"({"schema_version":"1","kind":"lattice","payload":{"dim_v":1,"periods":[["x"]]}})"),
            ErrorCode::kParseError);
  EXPECT_EQ(parse_error(R"({"schema_version":"1","kind":"lattice","payload":{"dim_v":1,"periods":[["1/0"]]}})"),
            ErrorCode::kParseError);
}

TEST(Digest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Commands, KRangeParsing) {
  EXPECT_EQ(parse_k_range("1..4"), (std::vector<long>{1, 2, 3, 4}));
  EXPECT_EQ(parse_k_range("2,5,7"), (std::vector<long>{2, 5, 7}));
  EXPECT_EQ(parse_k_range("3"), (std::vector<long>{3}));
  for (const char* bad : {"", "4..1", "a", "1..", "0"}) {
    try {
      parse_k_range(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigInvalid) << bad;
    }
  }
}

TEST(Commands, ReportsAreDeterministic) {
  for (const char* name : {"classification_demo.json", "growth_two_lines.json", "qr_counterexample.json"}) {
    std::string bytes = read(kModels / name);
    ModelFile m = parse_model(bytes);
    CommandOptions opt{{}, 7};
    RunReport a, b;
    if (m.kind() == ModelKind::kLattice) {
      a = cmd_classify(m, bytes, opt);
      b = cmd_classify(m, bytes, opt);
    } else if (m.kind() == ModelKind::kPresentation) {
      a = cmd_quantize(m, bytes, opt);
      b = cmd_quantize(m, bytes, opt);
    } else {
      a = cmd_qr(m, bytes, opt);
      b = cmd_qr(m, bytes, opt);
    }
    EXPECT_EQ(a.result_digest(), b.result_digest());
    EXPECT_EQ(a.to_csv(), b.to_csv());
    EXPECT_EQ(a.input_digest, sha256_hex(bytes));
    EXPECT_TRUE(a.all_pass());
  }
}

TEST(Commands, QrTableOnShippedCounterexample) {
  std::string bytes = read(kModels / "qr_counterexample.json");
  auto report = cmd_qr(parse_model(bytes), bytes, CommandOptions{{2}, 1});
  std::string csv = report.to_csv();
  EXPECT_NE(csv.find("2,6,2"), std::string::npos) << csv;
}

TEST(Commands, QuantizeLineTable) {
  std::string bytes = read(kModels / "growth_line.json");
  auto report = cmd_quantize(parse_model(bytes), bytes, CommandOptions{});
  std::string csv = report.to_csv();
  for (const char* row : {"1,4", "2,7", "3,10", "4,13"}) EXPECT_NE(csv.find(row), std::string::npos) << csv;
}

TEST(Cli, ExitCodes) {
  const CliCase cases[] = {
      {"check", "canonical_1_2.json", 0},       {"check", "canonical_2_2_kahler.json", 0},
      {"check", "symplectic_plane.json", 0},    {"check", "su2.json", 0},
      {"check", "not_skew.json", 1},            {"check", "rep_canonical.json", 0},
      {"check", "toric_negative_degree.json", 1}, {"check", "monodromy_swap.json", 0},
      {"check", "monodromy_scaled.json", 1},    {"classify", "classification_demo.json", 0},
      {"classify", "classification_sheared.json", 0}, {"classify", "exact_periods.json", 0},
      {"quantize", "growth_line.json", 0},      {"quantize", "growth_two_lines.json", 0},
      {"quantize", "growth_two_weights.json", 0}, {"quantize", "growth_not_positive.json", 1},
      {"qr", "qr_counterexample.json", 0},      {"qr", "qr_control.json", 0},
      {"qr", "canonical_1_2.json", 2},          {"classify", "growth_line.json", 2},
  };
  for (const auto& c : cases) {
    std::string args = std::string(c.command) + " " + (kModels / c.file).string();
    EXPECT_EQ(run_cli(args), c.exit_code) << args;
  }
  EXPECT_EQ(run_cli("check /nonexistent/model.json"), 2);
  EXPECT_EQ(run_cli("qr " + (kModels / "qr_control.json").string() + " --k ''"), 2);
  EXPECT_EQ(run_cli("qr " + (kModels / "qr_control.json").string() + " --k 5..1"), 2);
  EXPECT_EQ(run_cli("frobnicate x"), 2);
}

TEST(Cli, CsvAndOutFile) {
  fs::path out = fs::temp_directory_path() / "polyquant_io_test.csv";
  fs::remove(out);
  std::string args = "qr " + (kModels / "qr_control.json").string() + " --k 1..3 --csv --out " + out.string();
  ASSERT_EQ(run_cli(args), 0);
  std::string text = read(out);
  EXPECT_EQ(text.rfind("# ", 0), 0u) << text;
  EXPECT_NE(text.find("1,3,3"), std::string::npos) << text;
  fs::remove(out);
}
