// eqrec: recession analysis and equilibrium checks on national input-output tables.
//
//   eqrec analyze table.csv [--meta meta.csv] [--pi 0.8|pi.csv] [--top 4] [--format json]
//   eqrec equilibrium table.csv [--pi ...] [--tol 1e-9]
//   eqrec demo E1|E2|random[:seed=42,n=4,l=3,I=2]
//
// Exit codes: 0 success, 2 schema/config/usage error, 3 computation error,
// 4 no equilibrium certified.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eqrec/eqrec.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitCompute = 3;
constexpr int kExitNotCertified = 4;

struct Options {
  std::string input;
  std::string meta;
  std::string pi = "1";
  std::size_t top = 4;
  std::string format = "json";
  std::optional<double> tol;
  std::uint64_t seed = 42;
  std::string aggregate;
  std::string out;
  bool clamp_negative = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Directory that receives the report files");
}

void add_table(CLI::App* cmd, Options& o) {
  cmd->add_option("table", o.input, "Input-output table CSV")->required();
  cmd->add_option("--meta", o.meta, "meta.csv with country,year,currency");
  cmd->add_option("--pi", o.pi, "Taxation share: a scalar in [0,1] or a CSV file with one value per industry")
      ->capture_default_str();
  cmd->add_option("--aggregate", o.aggregate, "Aggregation map CSV (industry_index,block[,block_name])");
  cmd->add_flag("--clamp-negative", o.clamp_negative, "Clamp negative cells to zero with a warning");
}

bool is_input_error(eqrec::ErrorCode code) {
  using eqrec::ErrorCode;
  return code == ErrorCode::kSchemaError || code == ErrorCode::kNegativeValue ||
         code == ErrorCode::kConfigError || code == ErrorCode::kUnknownFixture ||
         code == ErrorCode::kBlockMismatch;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  eqrec::require(static_cast<bool>(f), eqrec::ErrorCode::kConfigError,
                 "cannot write " + path.string());
  f << text;
}

std::filesystem::path out_dir(const Options& o) {
  std::filesystem::create_directories(o.out);
  return o.out;
}

eqrec::NiotTable load_table(const Options& o) {
  std::optional<std::filesystem::path> meta;
  if (!o.meta.empty()) meta = o.meta;
  return eqrec::parse_niot(o.input, meta, eqrec::ParseOptions{o.clamp_negative});
}

eqrec::RunConfig make_config(const Options& o, const eqrec::NiotTable& table) {
  eqrec::RunConfig config;
  config.pi = eqrec::parse_pi_spec(o.pi);
  config.top_k = o.top;
  config.format = eqrec::parse_format(o.format);
  config.seed = o.seed;
  if (!o.aggregate.empty())
    config.aggregation =
        eqrec::parse_aggregation_map_text(eqrec::read_file(o.aggregate), table.industries());
  return config;
}

int run_analyze(const Options& o) {
  const eqrec::NiotTable table = load_table(o);
  eqrec::RunConfig config = make_config(o, table);
  if (o.tol) config.recession_tol = *o.tol;
  const eqrec::AnalyzeResult result = eqrec::run_analyze(table, config);
  const std::string json = eqrec::analyze_json(result).dump(2) + "\n";
  if (!o.out.empty()) {
    const auto dir = out_dir(o);
    write_file(dir / "report.json", json);
    write_file(dir / "deficits.csv", eqrec::deficits_csv(result));
    write_file(dir / "histogram.csv", eqrec::histogram_csv(result));
  }
  switch (config.format) {
    case eqrec::OutputFormat::kJson: std::cout << json; break;
    case eqrec::OutputFormat::kCsv: std::cout << eqrec::deficits_csv(result); break;
    case eqrec::OutputFormat::kText: std::cout << eqrec::analyze_text(result); break;
  }
  return kExitOk;
}

int run_equilibrium(const Options& o) {
  const eqrec::NiotTable table = load_table(o);
  eqrec::RunConfig config = make_config(o, table);
  if (o.tol) config.tol = *o.tol;
  const eqrec::EquilibriumRun run = eqrec::run_equilibrium(table, config);
  const std::string json = eqrec::equilibrium_json(run).dump(2) + "\n";
  if (!o.out.empty()) {
    const auto dir = out_dir(o);
    write_file(dir / "equilibrium.json", json);
    write_file(dir / "equilibrium.csv", eqrec::equilibrium_csv(run));
  }
  switch (config.format) {
    case eqrec::OutputFormat::kJson: std::cout << json; break;
    case eqrec::OutputFormat::kCsv: std::cout << eqrec::equilibrium_csv(run); break;
    case eqrec::OutputFormat::kText: std::cout << eqrec::equilibrium_text(run); break;
  }
  return run.certified ? kExitOk : kExitNotCertified;
}

int run_demo(const Options& o) {
  const eqrec::Transcript t = eqrec::run_theorems(o.input, o.seed);
  const std::string json = t.to_json().dump(2) + "\n";
  if (!o.out.empty()) write_file(out_dir(o) / "transcript.json", json);
  switch (eqrec::parse_format(o.format)) {
    case eqrec::OutputFormat::kJson: std::cout << json; break;
    case eqrec::OutputFormat::kCsv: std::cout << eqrec::transcript_csv(t); break;
    case eqrec::OutputFormat::kText: std::cout << eqrec::transcript_text(t); break;
  }
  return t.passed ? kExitOk : kExitCompute;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recession analysis and equilibrium checks for input-output tables"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Demand/supply deficits, recession set and ratio");
  add_table(analyze, o);
  add_common(analyze, o);
  analyze->add_option("--top", o.top, "Rows in each ranking")->capture_default_str();
  analyze->add_option("--tol", o.tol, "Relative band for the recession sign test (default 0)");

  auto* equilibrium = app.add_subcommand("equilibrium", "Leontief equilibrium solve and value balance");
  add_table(equilibrium, o);
  add_common(equilibrium, o);
  equilibrium->add_option("--tol", o.tol, "Equilibrium tolerance (default 1e-9)");

  auto* demo = app.add_subcommand("demo", "Run a built-in fixture: E1, E2 or random[:seed=..,n=..,l=..,I=..]");
  demo->add_option("fixture", o.input, "Fixture name")->required();
  demo->add_option("--seed", o.seed, "Seed for random fixtures without an explicit seed")
      ->capture_default_str();
  add_common(demo, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    if (*analyze) return run_analyze(o);
    if (*equilibrium) return run_equilibrium(o);
    return run_demo(o);
  } catch (const eqrec::Error& e) {
    std::cerr << "eqrec: " << (o.input.empty() ? "" : o.input + ": ") << e.what() << "\n";
    return is_input_error(e.code()) ? kExitSchema : kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "eqrec: " << e.what() << "\n";
    return kExitCompute;
  }
}
