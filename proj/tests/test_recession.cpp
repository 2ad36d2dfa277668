#include <gtest/gtest.h>

#include <random>

#include "eqrec/eqrec.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace eqrec;

namespace {

IOAccounts t1(double pi = 1.0) {
  IOAccounts acc;
  acc.flows.resize(2, 2);
  acc.flows << 10, 20, 30, 10;
  acc.gross_output = Vec::Constant(2, 100);
  acc.final_consumption.resize(2);
  acc.final_consumption << 50, 30;
  acc.exports.resize(2);
  acc.exports << 20, 10;
  acc.imports.resize(2);
  acc.imports << 5, 15;
  acc.pi = Vec::Constant(2, pi);
  return acc;
}

oracle::Accounts to_oracle(const IOAccounts& a) {
  return oracle::from_eigen(a.flows, a.gross_output, a.final_consumption, a.exports, a.imports,
                            a.pi);
}

}  // namespace

TEST(Demand, ToyT1) {
  const Vec d = demand_vector(t1());
  EXPECT_NEAR(d(0), 118.75, 1e-12);
  EXPECT_NEAR(d(1), 101.25, 1e-12);
}

TEST(Demand, MatchesOracleOnRandomAccounts) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const IOAccounts acc = gen::value_accounts(rng, gen::pick(rng, 1, 20));
    const Vec d = demand_vector(acc);
    EXPECT_LE(oracle::max_abs_diff(oracle::demand(to_oracle(acc)), d),
              1e-12 * supply_vector(acc).sum());
  }
}

TEST(Demand, PiZeroNoTradeNoFlows) {
  IOAccounts acc;
  acc.flows = Mat::Zero(3, 3);
  acc.gross_output = Vec::LinSpaced(3, 10, 30);
  acc.final_consumption.resize(3);
  acc.final_consumption << 1, 2, 5;
  acc.exports = Vec::Zero(3);
  acc.imports = Vec::Zero(3);
  acc.pi = Vec::Zero(3);
  const Vec d = demand_vector(acc);
  const Vec expected = acc.final_consumption * acc.gross_output.sum() / acc.final_consumption.sum();
  EXPECT_LE((d - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Demand, Homogeneity) {
  const Vec d = demand_vector(t1().scaled(10.0));
  EXPECT_NEAR(d(0), 1187.5, 1e-10);
  EXPECT_NEAR(d(1), 1012.5, 1e-10);
}

TEST(Demand, ZeroDenominators) {
  IOAccounts acc = t1();
  acc.final_consumption.setZero();
  EXPECT_THROW(demand_vector(acc), Error);
  acc = t1();
  acc.exports.setZero();
  try {
    demand_vector(acc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroDenominator);
  }
}

TEST(Supply, Examples) {
  const Vec s = supply_vector(t1());
  EXPECT_DOUBLE_EQ(s(0), 105);
  EXPECT_DOUBLE_EQ(s(1), 115);
  IOAccounts no_imports = t1();
  no_imports.imports.setZero();
  EXPECT_TRUE(supply_vector(no_imports).isApprox(no_imports.gross_output));
  IOAccounts hydrocarbon;
  hydrocarbon.gross_output = Vec::Constant(1, 28986);
  hydrocarbon.imports = Vec::Constant(1, 109950);
  EXPECT_DOUBLE_EQ(supply_vector(hydrocarbon)(0), 138936);
}

TEST(RecessionSet, Examples) {
  const IOAccounts acc = t1();
  const RecessionSet set = recession_industries(demand_vector(acc), supply_vector(acc));
  EXPECT_EQ(set.industries, (IndexSet{1}));
  EXPECT_NEAR(set.shortfall(0), 13.75, 1e-12);
  const Vec s = supply_vector(acc);
  EXPECT_TRUE(recession_industries(s, s).industries.empty());
  // A band wider than the deficit suppresses it.
  EXPECT_TRUE(recession_industries(demand_vector(acc), s, 0.2).industries.empty());
}

TEST(RecessionRatio, Examples) {
  const IOAccounts acc = t1();
  EXPECT_NEAR(recession_ratio(acc, demand_vector(acc), supply_vector(acc)), 13.75 / 130, 1e-12);
  const Vec s = supply_vector(acc);
  EXPECT_EQ(recession_ratio(acc, s, s), 0.0);
  IOAccounts loss = acc;
  loss.gross_output = Vec::Constant(2, 30);
  try {
    recession_ratio(loss, s, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonpositiveGdp);
  }
}

TEST(RecessionRatio, MatchesOracleAndIsScaleFree) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const IOAccounts acc = gen::value_accounts(rng, gen::pick(rng, 2, 15));
    const RecessionReport rep = analyze_recession(acc);
    EXPECT_NEAR(rep.ratio, static_cast<double>(oracle::recession_ratio(to_oracle(acc))), 1e-12);
    EXPECT_GE(rep.ratio, 0.0);
    const double alpha = gen::uni(rng, 0.01, 100);
    EXPECT_NEAR(analyze_recession(acc.scaled(alpha)).ratio, rep.ratio, 1e-12 * std::max(1.0, rep.ratio));
  }
}

TEST(ValueBalance, RandomAccounts) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const IOAccounts acc = gen::value_accounts(rng, gen::pick(rng, 2, 30));
    const double s = supply_vector(acc).sum();
    EXPECT_LE(std::abs(demand_vector(acc).sum() - s) / s, 1e-9);
  }
}

TEST(Consistency, DeficitEqualsValueResidual) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    const IOAccounts acc = gen::value_accounts(rng, gen::pick(rng, 1, 20));
    const RecessionReport rep = analyze_recession(acc);
    const ValueEquilibriumReport value = check_value_equilibrium(acc);
    EXPECT_LE((rep.deficit - value.residual).cwiseAbs().maxCoeff(),
              1e-12 * std::max(1.0, rep.supply.maxCoeff()));
  }
}

TEST(Monotonicity, ExportsRaiseOwnDemand) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    IOAccounts acc = gen::value_accounts(rng, gen::pick(rng, 2, 12));
    const Index k = gen::pick(rng, 0, acc.industries() - 1);
    const double before = demand_vector(acc)(k);
    acc.exports(k) *= gen::uni(rng, 1.0, 3.0);
    EXPECT_GE(demand_vector(acc)(k), before - 1e-12 * before);
  }
}

TEST(Ranking, ToyT1AndEmpty) {
  const RecessionReport rep = analyze_recession(t1());
  for (RankingMode mode : {RankingMode::kSensitive, RankingMode::kContributing}) {
    const auto rows = rank_industries(rep, 1, mode, {"Alpha", "Beta"});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].index, 1);
    EXPECT_EQ(rows[0].name, "Beta");
    EXPECT_NEAR(rows[0].shortfall, 13.75, 1e-12);
    EXPECT_DOUBLE_EQ(rows[0].imports, 15);
    EXPECT_DOUBLE_EQ(rows[0].exports, 10);
  }
  RecessionReport empty = rep;
  empty.recession = RecessionSet{};
  EXPECT_TRUE(rank_industries(empty, 4, RankingMode::kSensitive).empty());
}

TEST(Ranking, ModesOrderDifferently) {
  RecessionReport rep;
  rep.recession.industries = {0, 1, 2};
  rep.recession.shortfall = Vec(3);
  rep.recession.shortfall << 10, 50, 30;
  rep.gross_output = Vec(3);
  rep.gross_output << 11, 500, 40;
  rep.imports = Vec::Zero(3);
  rep.exports = Vec::Zero(3);
  const auto contributing = rank_industries(rep, 3, RankingMode::kContributing);
  EXPECT_EQ(contributing[0].index, 1);
  EXPECT_EQ(contributing[1].index, 2);
  EXPECT_EQ(contributing[2].index, 0);
  const auto sensitive = rank_industries(rep, 2, RankingMode::kSensitive);
  ASSERT_EQ(sensitive.size(), 2u);
  EXPECT_EQ(sensitive[0].index, 0);
  EXPECT_EQ(sensitive[1].index, 2);
  EXPECT_EQ(sensitive[0].name, "1");
}
