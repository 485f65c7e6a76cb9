#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "procgeo/csv.hpp"
#include "procgeo/error.hpp"

namespace procgeo {
namespace {

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(1e-6), "1e-06");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, (i % 40) - 20);
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
}

TEST(ParseDouble, Strict) {
  EXPECT_EQ(parse_double("+1.5"), 1.5);
  EXPECT_EQ(parse_double("-3e2"), -300.0);
  for (const char* bad : {"", "1.5x", "nan", "inf", "1e999", "+", "abc"}) {
    EXPECT_THROW(parse_double(bad), ValidationError) << bad;
  }
}

TEST(MatrixCsv, RoundTrip) {
  Eigen::MatrixXd m(4, 4);
  m << 0, 1.5, -2, 0.25,  //
      -1.5, 0, 3, 1e-7,   //
      2, -3, 0, -4,       //
      -0.25, -1e-7, 4, 0;
  const RelationalMatrix b(m);
  std::ostringstream out;
  write_matrix_csv(out, b);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "i,j,value");
  std::istringstream in(text);
  EXPECT_EQ(read_matrix_csv(in, 4), b);
}

TEST(MatrixCsv, OnlyUpperTriangle) {
  std::istringstream bad("i,j,value\n1,0,2\n");
  EXPECT_THROW(read_matrix_csv(bad, 2), ValidationError);
}

TEST(ProfileCsv, WritesZeroRowAndReadsBack) {
  const auto prof = ShellProfile::from_shells({3, 5, 2});
  std::ostringstream out;
  write_profile_csv(out, prof);
  EXPECT_EQ(out.str(), "k,D_k\n0,1\n1,3\n2,5\n3,2\n");
  std::istringstream in(out.str());
  EXPECT_EQ(read_profile_csv(in), (std::vector<double>{3.0, 5.0, 2.0}));
}

TEST(ProfileCsv, AcceptsRealsAndRejectsBadLayout) {
  std::istringstream reals("k,D_k\n0,1\n1,2.5\n2,7.25\n");
  EXPECT_EQ(read_profile_csv(reals), (std::vector<double>{2.5, 7.25}));
  std::istringstream no_zero("k,D_k\n1,2\n2,3\n");
  EXPECT_THROW(read_profile_csv(no_zero), ValidationError);
  std::istringstream gap("k,D_k\n0,1\n1,2\n3,3\n");
  EXPECT_THROW(read_profile_csv(gap), ValidationError);
  std::istringstream header("x,y\n0,1\n");
  EXPECT_THROW(read_profile_csv(header), ValidationError);
}

TEST(CurveCsv, Layout) {
  std::vector<DimensionCurvePoint> curve{{1e-6, 2.5, 41, -100.25, {}}, {1e-3, 4.0, 8, -7.5, {}}};
  std::ostringstream out;
  write_curve_csv(out, curve);
  EXPECT_EQ(out.str(), "log10_p,d,L,log_prob\n-6,2.5,41,-100.25\n-3,4,8,-7.5\n");
}

}  // namespace
}  // namespace procgeo
