#include <gtest/gtest.h>

#include <cmath>

#include "vper/theorem_probe.hpp"

using namespace vper;
using namespace vper::probe;

TEST(Alpha, Values) {
  EXPECT_DOUBLE_EQ(alpha_exponent(3, 1.0), 1.5);
  EXPECT_DOUBLE_EQ(alpha_exponent(3, 6.0 / 5.0), 1.0);
  EXPECT_DOUBLE_EQ(alpha_exponent(4, 2.0), 0.0);
  EXPECT_THROW(alpha_exponent(3, 0.9), std::invalid_argument);
  EXPECT_THROW(alpha_exponent(3, 2.5), std::invalid_argument);
  EXPECT_DOUBLE_EQ(p_limit(3), 1.2);
}

TEST(RangeCheck, Examples) {
  EXPECT_TRUE(admissible_range_check(3, 1.0, 5.0));
  const auto hi = admissible_range(3, 1.1, 12.0);
  EXPECT_FALSE(hi.in_range);
  EXPECT_NE(hi.annotation.find("rectangle family witnesses sharpness"), std::string::npos);
  const auto lo = admissible_range(4, 1.2, 1.1);
  EXPECT_FALSE(lo.in_range);
  EXPECT_NE(lo.annotation.find("small-ball"), std::string::npos);
  EXPECT_FALSE(admissible_range_check(2, 1.0, 2.0));
  EXPECT_FALSE(admissible_range_check(3, 1.2, 2.0));
  EXPECT_TRUE(admissible_range_check(3, 1.1, 11.0));
}

TEST(ProbeFamily, RefusesBoundaryP) {
  try {
    build_family(3, 1.2);
    FAIL() << "p = 6/5 accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("2d/(d+2)"), std::string::npos);
  }
  EXPECT_THROW(build_family(2, 1.0), std::invalid_argument);
}

TEST(ProbeFamily, SmallD4FamilyIsCertifiedAndBounded) {
  ProbeOptions opt;
  opt.m_lo = 10;
  opt.m_hi = 13;
  opt.translates = 2;
  opt.dilates = 1;
  opt.modulations = 2;
  opt.combinations = 2;
  auto fam = build_family(4, 1.0, opt);
  ASSERT_EQ(fam.members.size(), 4u + 2 + 1 + 2 + 2);
  for (const auto& m : fam.members) EXPECT_TRUE(m.certified) << m.label;
  const auto rep = probe_ratio(fam);
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(std::isinf(rep.p_conjugate));
  EXPECT_LE(rep.max_ratio, 10.0 * rep.median_ratio);
  for (const auto& m : fam.members) {
    EXPECT_GT(m.ratio, 0.0);
    EXPECT_LT(m.norm_p.budget, 1e-4 * m.norm_p.value) << m.label;
  }
}

TEST(ProbeFamily, TranslatesAndModulationsKeepTheRatio) {
  ProbeOptions opt;
  opt.m_lo = 10;
  opt.m_hi = 10;
  opt.translates = 1;
  opt.dilates = 0;
  opt.modulations = 1;
  opt.combinations = 0;
  auto fam = build_family(4, 1.0, opt);
  probe_ratio(fam);
  ASSERT_EQ(fam.members.size(), 3u);
  for (std::size_t i = 1; i < 3; ++i) {
    EXPECT_NEAR(fam.members[i].ratio, fam.members[0].ratio, 1e-8 * fam.members[0].ratio);
  }
}

TEST(ProbeFamily, UncertifiedMemberAborts) {
  ProbeOptions opt;
  opt.m_lo = 10;
  opt.m_hi = 10;
  opt.translates = opt.dilates = opt.modulations = opt.combinations = 0;
  auto fam = build_family(4, 1.0, opt);
  // Annulus straddling the sphere of radius sqrt 10.
  auto bad = std::make_shared<const AnnulusProfile>(4, 3.1, 3.2);
  fam.members.push_back({"straddle", MemberKind::Annulus, TestFunction(bad)});
  try {
    probe_ratio(fam);
    FAIL() << "uncertified member accepted";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("straddle"), std::string::npos);
  }
}

TEST(ProbeFamily, D3UsesSumsOfThreeSquares) {
  ProbeOptions opt;
  opt.m_lo = 26;
  opt.m_hi = 30;
  opt.translates = opt.dilates = opt.modulations = opt.combinations = 0;
  const auto fam = build_family(3, 1.0, opt);
  // 28 = 4 (8 * 0 + 7) is skipped: 27 -> 29.
  std::vector<std::string> labels;
  for (const auto& m : fam.members) labels.push_back(m.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"annulus(26,27)", "annulus(27,29)", "annulus(29,30)", "annulus(30,32)"}));
}

TEST(Dilation, SlopeMatchesExponent) {
  auto base = std::make_shared<const AnnulusProfile>(4, 3.17, 3.30);
  const std::vector<double> t{0.5, 1.0, 2.0};
  for (double p : {1.0, 1.2}) {
    const double q = p == 1.0 ? 0.0 : (p - 1.0) / p;
    const double expect = 4.0 * (1.0 / p - q);
    EXPECT_NEAR(dilation_slope(base, p, t), expect, 0.02 * expect) << p;
  }
}
