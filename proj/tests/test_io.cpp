#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "eqrec/eqrec.hpp"
#include "support/generators.hpp"

using namespace eqrec;

namespace {

const std::filesystem::path kFixtures = EQREC_FIXTURES;

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "eqrec_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

}  // namespace

TEST(Csv, QuotingRoundTrip) {
  const csv::Row row = {"plain", "with,comma", "with \"quote\"", "", "line\nbreak"};
  const auto parsed = csv::parse(csv::join(row) + "\r\n");
  ASSERT_EQ(parsed.size(), 1u);
  EXPECT_EQ(parsed[0], row);
  EXPECT_EQ(csv::quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::quote("ab"), "ab");
}

TEST(Csv, BomBlankLinesAndErrors) {
  const auto rows = csv::parse("\xEF\xBB\xBF" "a,b\n\n1,2\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "a");
  EXPECT_THROW(csv::parse("a,\"open\n"), SchemaError);
}

TEST(Csv, Numbers) {
  EXPECT_EQ(csv::to_double("1.5"), 1.5);
  EXPECT_EQ(csv::to_double(" +2 "), 2.0);
  EXPECT_FALSE(csv::to_double("ten"));
  EXPECT_FALSE(csv::to_double("1.5x"));
  EXPECT_FALSE(csv::to_double("inf"));
  EXPECT_FALSE(csv::to_double(""));
  EXPECT_EQ(csv::to_long("12"), 12);
  EXPECT_FALSE(csv::to_long("1.2"));
  EXPECT_EQ(csv::format_sig6(0.105769230769), "0.105769");
  EXPECT_EQ(csv::format_sig6(118.75), "118.75");
  std::mt19937_64 rng(61);
  for (int i = 0; i < 1000; ++i) {
    const double v = gen::uni(rng, -1e6, 1e6) * std::pow(10.0, gen::pick(rng, -8, 8));
    EXPECT_EQ(csv::to_double(csv::format_exact(v)), v);
  }
}

TEST(Niot, ParsesToyFixtureWithMeta) {
  const NiotTable t = parse_niot(kFixtures / "t1" / "table.csv");
  ASSERT_EQ(t.industries(), 2);
  EXPECT_EQ(t.names, (std::vector<std::string>{"Alpha", "Beta"}));
  EXPECT_EQ(t.country, "T1");
  EXPECT_EQ(t.year, 2011);
  EXPECT_EQ(t.currency, "EUR");
  EXPECT_DOUBLE_EQ(t.flows(0, 1), 20);
  EXPECT_DOUBLE_EQ(t.flows(1, 0), 30);
  EXPECT_DOUBLE_EQ(t.final_consumption()(0), 50);
  EXPECT_DOUBLE_EQ(t.final_consumption()(1), 30);
  const IOAccounts acc = t.accounts(Vec::Ones(2));
  const Vec d = demand_vector(acc);
  EXPECT_NEAR(d(0), 118.75, 1e-12);
  EXPECT_NEAR(d(1), 101.25, 1e-12);
}

TEST(Niot, MissingMetaLeavesYearEmpty) {
  const auto path = temp_file("lonely.csv", read_file(kFixtures / "t1" / "table.csv"));
  std::filesystem::remove(path.parent_path() / "meta.csv");
  const NiotTable t = parse_niot(path);
  EXPECT_FALSE(t.year);
  EXPECT_TRUE(t.country.empty());
}

TEST(Niot, SchemaErrors) {
  EXPECT_EQ(code_of([] { parse_niot(kFixtures / "bad" / "empty.csv"); }), ErrorCode::kSchemaError);
  try {
    parse_niot(kFixtures / "bad" / "header.csv");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 6u);
  }
  try {
    parse_niot(kFixtures / "bad" / "text_cell.csv");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_GE(e.row(), 2u);
    EXPECT_GE(e.col(), 3u);
    EXPECT_NE(std::string(e.what()).find("ten"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { parse_niot(kFixtures / "missing.csv"); }), ErrorCode::kConfigError);
  const std::string wrong_index = niot_header(1) + "\n2,A,1,1,0,0,0,5\n";
  EXPECT_EQ(code_of([&] { parse_niot_text(wrong_index); }), ErrorCode::kSchemaError);
  const std::string short_table = niot_header(2) + "\n1,A,1,1,1,0,0,0,5\n";
  EXPECT_EQ(code_of([&] { parse_niot_text(short_table); }), ErrorCode::kSchemaError);
}

TEST(Niot, NegativeValues) {
  const auto path = kFixtures / "bad" / "negative.csv";
  EXPECT_EQ(code_of([&] { parse_niot(path); }), ErrorCode::kNegativeValue);
  const NiotTable t = parse_niot(path, std::nullopt, ParseOptions{true});
  ASSERT_EQ(t.warnings.size(), 1u);
  EXPECT_DOUBLE_EQ(t.gcf_inventory(0), 0.0);
  EXPECT_DOUBLE_EQ(t.gcf_inventory(1), 5.0);
}

TEST(Niot, RegistryNamesAndRoundTrip) {
  std::mt19937_64 rng(62);
  NiotTable t;
  const Index m = 34;
  t.flows = gen::positive_mat(rng, m, m, 0, 100);
  t.household_consumption = gen::positive_vec(rng, m, 0, 100);
  t.gcf_inventory = gen::positive_vec(rng, m, 0, 10);
  t.exports = gen::positive_vec(rng, m, 0, 50);
  t.imports = gen::positive_vec(rng, m, 0, 50);
  t.gross_output = gen::positive_vec(rng, m, 500, 1000);
  const NiotTable back = parse_niot_text(serialize_niot(t));
  EXPECT_EQ(back.display_names(), wiod34_registry());
  EXPECT_EQ(back.flows, t.flows);
  EXPECT_EQ(back.gross_output, t.gross_output);
  EXPECT_EQ(back.imports, t.imports);
  EXPECT_EQ(serialize_niot(back), serialize_niot(t));

  NiotTable small = back;
  small.flows = small.flows.topLeftCorner(3, 3).eval();
  for (Vec* v : {&small.household_consumption, &small.gcf_inventory, &small.exports,
                 &small.imports, &small.gross_output})
    *v = v->head(3).eval();
  small.names.clear();
  EXPECT_EQ(parse_niot_text(serialize_niot(small)).display_names(),
            (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(ukraine38_registry().size(), 38u);
}

TEST(Niot, RandomTablesRoundTripExactly) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = gen::pick(rng, 1, 12);
    NiotTable t;
    t.flows = gen::positive_mat(rng, m, m, 0, 1e7);
    t.household_consumption = gen::positive_vec(rng, m, 0, 1e7);
    t.gcf_inventory = gen::positive_vec(rng, m, 0, 1e3);
    t.exports = gen::positive_vec(rng, m, 0, 1e-3);
    t.imports = gen::positive_vec(rng, m, 0, 1);
    t.gross_output = gen::positive_vec(rng, m, 1, 1e9);
    for (Index k = 0; k < m; ++k) t.names.push_back("ind, \"" + std::to_string(k) + "\"");
    t.country = "X,Y";
    t.year = 2000 + trial;
    t.currency = "USD";
    const auto dir = std::filesystem::temp_directory_path() / "eqrec_rt";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "table.csv", std::ios::binary) << serialize_niot(t);
    std::ofstream(dir / "meta.csv", std::ios::binary) << serialize_meta(t);
    const NiotTable back = parse_niot(dir / "table.csv");
    EXPECT_EQ(back.flows, t.flows);
    EXPECT_EQ(back.household_consumption, t.household_consumption);
    EXPECT_EQ(back.gcf_inventory, t.gcf_inventory);
    EXPECT_EQ(back.exports, t.exports);
    EXPECT_EQ(back.imports, t.imports);
    EXPECT_EQ(back.gross_output, t.gross_output);
    EXPECT_EQ(back.names, t.names);
    EXPECT_EQ(back.country, t.country);
    EXPECT_EQ(back.year, t.year);
  }
}

TEST(Config, PiSpec) {
  EXPECT_EQ(std::get<double>(parse_pi_spec("0.5")), 0.5);
  const Vec v = std::get<Vec>(parse_pi_spec((kFixtures / "t1" / "pi_half.csv").string()));
  EXPECT_EQ(v.size(), 2);
  EXPECT_EQ(v(1), 0.5);
  EXPECT_EQ(code_of([] { parse_pi_spec("nope"); }), ErrorCode::kConfigError);
  const auto bad = temp_file("pi_bad.csv", "pi\n0.5\nx\n");
  EXPECT_EQ(code_of([&] { parse_pi_spec(bad.string()); }), ErrorCode::kConfigError);
}

TEST(Config, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.resolve_pi(3), Vec::Ones(3));
  c.pi = 1.5;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kConfigError);
  c.pi = Vec::Constant(2, 0.3);
  EXPECT_EQ(code_of([&] { c.resolve_pi(3); }), ErrorCode::kConfigError);
  c.pi = 0.2;
  c.tol = 0.0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kConfigError);
  EXPECT_EQ(parse_format("csv"), OutputFormat::kCsv);
  EXPECT_EQ(code_of([] { parse_format("xml"); }), ErrorCode::kConfigError);
}

TEST(Config, AggregationMap) {
  const BlockMap named = parse_aggregation_map_text(read_file(kFixtures / "t1" / "blocks.csv"), 2);
  EXPECT_EQ(named.map.blocks(), 1);
  EXPECT_EQ(named.names, (std::vector<std::string>{"All"}));

  const BlockMap plain =
      parse_aggregation_map_text("industry_index,block\n1,7\n2,3\n3,7\n", 3);
  ASSERT_EQ(plain.map.blocks(), 2);
  EXPECT_EQ(plain.names, (std::vector<std::string>{"block 3", "block 7"}));
  EXPECT_EQ(plain.map.matrix(), (Mat(2, 3) << 0, 1, 0, 1, 0, 1).finished());

  EXPECT_EQ(code_of([] { parse_aggregation_map_text("industry_index,block\n1,1\n", 2); }),
            ErrorCode::kBlockMismatch);
  EXPECT_EQ(code_of([] { parse_aggregation_map_text("industry_index,block\n1,1\n1,2\n", 2); }),
            ErrorCode::kSchemaError);
  EXPECT_EQ(code_of([] { parse_aggregation_map_text("index,block\n1,1\n", 1); }),
            ErrorCode::kSchemaError);
  EXPECT_EQ(code_of([] { parse_aggregation_map_text("industry_index,block\n4,1\n", 3); }),
            ErrorCode::kSchemaError);
}
