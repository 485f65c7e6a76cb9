#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "procgeo/error.hpp"
#include "procgeo/likelihood.hpp"

namespace procgeo {
namespace {

double best_by_enumeration(std::size_t n, double p) {
  double best = -INFINITY;
  for (const auto& c : oracle::compositions(n - 1)) {
    best = std::max(best, oracle::direct_log_probability(c, p));
  }
  return best;
}

TEST(Maximize, TwoNodes) {
  const auto r = maximize_profile(LikelihoodQuery{2, 0.3});
  EXPECT_EQ(r.profile.shells, std::vector<std::size_t>{1});
  EXPECT_EQ(r.depth_swept, (DepthRange{1, 1}));
  EXPECT_NEAR(r.log_prob, std::log(0.3), 1e-14);
}

TEST(Maximize, ThreeNodesTwoCaseComparison) {
  const auto r = maximize_profile(LikelihoodQuery{3, 0.1}, DepthRange{1, 2});
  EXPECT_EQ(r.profile.shells, (std::vector<std::size_t>{1, 1}));
  EXPECT_NEAR(r.log_prob, 2.0 * std::log(0.1) + std::log(0.9), 1e-12);
  // q < 1/2 flips the comparison.
  const auto star = maximize_profile(LikelihoodQuery{3, 0.7}, DepthRange{1, 2});
  EXPECT_EQ(star.profile.shells, std::vector<std::size_t>{2});
}

TEST(Maximize, TenNodesMatchesExhaustiveOracle) {
  const double want = best_by_enumeration(10, 0.2);
  EXPECT_EQ(oracle::compositions(9).size(), 256u);
  const auto r = maximize_profile(LikelihoodQuery{10, 0.2}, DepthRange{1, 9});
  EXPECT_NEAR(r.log_prob, want, 1e-9);
  const auto brute = brute_force_profile(LikelihoodQuery{10, 0.2});
  EXPECT_NEAR(brute.log_prob, want, 1e-9);
  EXPECT_EQ(brute.method, MaximizationMethod::Enumeration);
  EXPECT_EQ(r.method, MaximizationMethod::RelaxationRefinement);
}

TEST(MaximizeProperty, AgreesWithEnumerationOnSmallGebits) {
  for (std::size_t n = 2; n <= 12; ++n) {
    for (double p : {0.05, 0.1, 0.2, 0.5}) {
      const double want = best_by_enumeration(n, p);
      const auto r = maximize_profile(LikelihoodQuery{n, p}, DepthRange{1, n - 1});
      EXPECT_NEAR(r.log_prob, want, 1e-9) << "N=" << n << " p=" << p;
      const auto brute = brute_force_profile(LikelihoodQuery{n, p});
      EXPECT_NEAR(brute.log_prob, want, 1e-9) << "N=" << n << " p=" << p;
    }
  }
}

TEST(MaximizeProperty, ResultIsFeasibleAndConsistent) {
  for (std::size_t n : {15, 60, 300}) {
    for (double p : {1e-6, 1e-3, 0.1}) {
      const auto r = maximize_profile(LikelihoodQuery{n, p});
      EXPECT_NO_THROW(r.profile.validate());
      EXPECT_EQ(r.profile.total_n, n);
      EXPECT_GE(r.profile.depth(), r.depth_swept.min);
      EXPECT_LE(r.profile.depth(), r.depth_swept.max);
      EXPECT_DOUBLE_EQ(r.log_prob, log_likelihood(r.profile, p));
    }
  }
}

TEST(Maximize, ParallelMatchesSerial) {
  MaximizeOptions par;
  par.parallel = true;
  const LikelihoodQuery q{400, 1e-4};
  const auto a = maximize_profile(q, DepthRange::defaults_for(400));
  const auto b = maximize_profile(q, DepthRange::defaults_for(400), par);
  EXPECT_EQ(a.profile, b.profile);
  EXPECT_EQ(a.log_prob, b.log_prob);
}

TEST(Maximize, RejectsBadRanges) {
  EXPECT_THROW(maximize_profile(LikelihoodQuery{10, 0.2}, DepthRange{5, 4}), ValidationError);
  EXPECT_THROW(maximize_profile(LikelihoodQuery{10, 0.2}, DepthRange{0, 4}), ValidationError);
  EXPECT_THROW(maximize_profile(LikelihoodQuery{10, 0.2}, DepthRange{10, 12}), ValidationError);
  EXPECT_THROW(maximize_profile(LikelihoodQuery{1, 0.2}), ValidationError);
  EXPECT_THROW(maximize_profile(LikelihoodQuery{10, 0.0}), ValidationError);
}

TEST(BruteForce, CapIsEnforced) {
  EXPECT_NO_THROW(brute_force_profile(LikelihoodQuery{14, 0.1}));
  try {
    brute_force_profile(LikelihoodQuery{15, 0.1});
    FAIL() << "expected cap error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("oracle cap exceeded"), std::string::npos);
  }
}

TEST(BruteForce, TrivialCases) {
  EXPECT_EQ(brute_force_profile(LikelihoodQuery{2, 0.5}).profile.shells, std::vector<std::size_t>{1});
  EXPECT_EQ(brute_force_profile(LikelihoodQuery{3, 0.1}).profile.shells,
            (std::vector<std::size_t>{1, 1}));
}

TEST(BruteForce, RestrictedRangeMatchesFilteredEnumeration) {
  for (std::size_t n : {6, 9, 12}) {
    for (double p : {0.05, 0.6}) {
      for (procgeo::DepthRange range : {DepthRange{2, n - 1}, DepthRange{3, 4}, DepthRange{1, 1}}) {
        double want = -INFINITY;
        for (const auto& c : oracle::compositions(n - 1)) {
          if (c.size() >= range.min && c.size() <= range.max) {
            want = std::max(want, oracle::direct_log_probability(c, p));
          }
        }
        const auto got = brute_force_profile(LikelihoodQuery{n, p}, range);
        EXPECT_NEAR(got.log_prob, want, 1e-9);
        EXPECT_GE(got.profile.depth(), range.min);
        EXPECT_LE(got.profile.depth(), range.max);
        EXPECT_NEAR(maximize_profile(LikelihoodQuery{n, p}, range).log_prob, want, 1e-9);
      }
    }
  }
  EXPECT_THROW(brute_force_profile(LikelihoodQuery{6, 0.1}, DepthRange{3, 6}), ValidationError);
}

TEST(RoundProfile, KeepsTotalAndFloor) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t depth = 2 + trial % 10;
    std::vector<double> excess(depth);
    for (auto& e : excess) e = u(rng);
    const double total_excess = 10.0 + trial;
    const double sum = std::accumulate(excess.begin(), excess.end(), 0.0);
    ContinuousProfile relaxed;
    for (double e : excess) relaxed.shells.push_back(1.0 + e * total_excess / sum);
    const auto n = static_cast<std::size_t>(std::llround(1.0 + depth + total_excess));
    const auto r = round_profile(relaxed, n);
    EXPECT_NO_THROW(r.validate());
    EXPECT_EQ(r.total_n, n);
    for (std::size_t k = 0; k < depth; ++k) {
      EXPECT_LT(std::abs(static_cast<double>(r.shells[k]) - relaxed.shells[k]), 1.0 + 1e-9);
    }
  }
}

TEST(RefineProfile, NeverWorsens) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> shell(1, 30);
    std::vector<std::size_t> d(2 + trial % 15);
    for (auto& x : d) x = shell(rng);
    const auto start = ShellProfile::from_shells(d);
    const double p = std::pow(10.0, -1.0 - 0.1 * trial);
    const auto out = refine_profile(start, p);
    EXPECT_EQ(out.total_n, start.total_n);
    EXPECT_EQ(out.depth(), start.depth());
    EXPECT_GE(log_likelihood(out, p), log_likelihood(start, p));
  }
}

TEST(RelaxProfile, StaysOnSimplexAndBeatsStart) {
  const LikelihoodQuery q{500, 1e-5};
  for (std::size_t depth : {3, 10, 25}) {
    const auto relaxed = relax_profile(q, depth);
    ASSERT_EQ(relaxed.depth(), depth);
    EXPECT_NEAR(relaxed.total_n(), 500.0, 1e-8);
    for (double d : relaxed.shells) EXPECT_GE(d, 1.0);
    const std::vector<double> flat(depth, 499.0 / static_cast<double>(depth));
    EXPECT_GE(log_likelihood(relaxed, q.link_prob), log_likelihood(flat, q.link_prob));
  }
}

}  // namespace
}  // namespace procgeo
