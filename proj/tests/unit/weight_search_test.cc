#include <gtest/gtest.h>

#include <cmath>

#include "mls/resources.h"
#include "mls/weight_search.h"
#include "synthetic.h"

namespace mls {
namespace {

PipelineConfig FastConfig() {
  PipelineConfig cfg;
  cfg.kernels.lda.iterations = 50;
  return cfg;
}

TEST(WeightGridTest, DefaultLatticeCount) {
  // Independent count: w1, w2 on 21 steps, w3 = 1 - w1 - w2 within [-1, 1].
  std::size_t want = 0;
  for (int i = -10; i <= 10; ++i) {
    for (int j = -10; j <= 10; ++j) {
      const int k = 10 - i - j;
      if (k >= -10 && k <= 10) ++want;
    }
  }
  const auto points = WeightGrid{}.Points();
  EXPECT_EQ(points.size(), want);
  EXPECT_EQ(points.size(), 231u);
  for (const auto& w : points) {
    EXPECT_NEAR(w[0] + w[1] + w[2], 1.0, 1e-12);
    for (double x : w) {
      EXPECT_GE(x, -1.0 - 1e-12);
      EXPECT_LE(x, 1.0 + 1e-12);
    }
  }
  EXPECT_TRUE(std::is_sorted(points.begin(), points.end(), [](const Weights& a, const Weights& b) {
    return std::tie(a[0], a[1]) < std::tie(b[0], b[1]);
  }));
}

TEST(WeightGridTest, UnitStepHasSixPoints) {
  const auto points = WeightGrid{1.0}.Points();
  const std::vector<Weights> want{{-1, 1, 1}, {0, 0, 1}, {0, 1, 0}, {1, -1, 1}, {1, 0, 0}, {1, 1, -1}};
  ASSERT_EQ(points.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(points[i][h], want[i][h], 1e-12);
  }
}

TEST(WeightGridTest, SinglePointAndInvalid) {
  const auto one = WeightGrid{0.1, 0.5, 0.5}.Points();
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0][2], 0.0, 1e-12);
  EXPECT_THROW(WeightGrid{0.0}.Points(), std::invalid_argument);
  EXPECT_THROW((WeightGrid{0.1, -2.0, 1.0}.Points()), std::invalid_argument);
}

class GridSearchTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    world_ = new synth::World();
    pairs_ = synth::TopicalCorpus(*world_, 6, 3);
    corpus_ = new PreparedCorpus(pairs_, world_->table(), resources::DefaultStopwords(), FastConfig());
  }
  static void TearDownTestSuite() {
    delete corpus_;
    delete world_;
  }
  static synth::World* world_;
  static std::vector<CorpusPair> pairs_;
  static PreparedCorpus* corpus_;
};
synth::World* GridSearchTest::world_ = nullptr;
std::vector<CorpusPair> GridSearchTest::pairs_;
PreparedCorpus* GridSearchTest::corpus_ = nullptr;

TEST_F(GridSearchTest, ReturnsFirstMaximumAndIsSelfConsistent) {
  const auto r = GridSearchWeights(*corpus_, 0.25, WeightGrid{0.5});
  ASSERT_EQ(r.scores.size(), WeightGrid{0.5}.Points().size());
  std::size_t first_best = 0;
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    EXPECT_NEAR(r.scores[i].rouge1, MeanRouge1(*corpus_, r.scores[i].weights, 0.25), 1e-12);
    if (r.scores[i].rouge1 > r.scores[first_best].rouge1) first_best = i;
  }
  EXPECT_EQ(r.weights, r.scores[first_best].weights);
  EXPECT_EQ(r.rouge1, r.scores[first_best].rouge1);
  EXPECT_NEAR(MeanRouge1(*corpus_, r.weights, 0.25), r.rouge1, 1e-12);
  EXPECT_EQ(r.step, 0.5);
  EXPECT_EQ(r.c_eval, 0.25);
}

TEST_F(GridSearchTest, SinglePointGrid) {
  const auto r = GridSearchWeights(*corpus_, 0.5, WeightGrid{0.1, 0.5, 0.5});
  EXPECT_NEAR(r.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(r.weights[1], 0.5, 1e-12);
  EXPECT_NEAR(r.rouge1, MeanRouge1(*corpus_, r.weights, 0.5), 1e-12);
}

TEST_F(GridSearchTest, ThreadCountDoesNotChangeResult) {
  const auto a = GridSearchWeights(*corpus_, 0.25, WeightGrid{1.0}, 1);
  const auto b = GridSearchWeights(*corpus_, 0.25, WeightGrid{1.0}, 4);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.rouge1, b.rouge1);
}

TEST(GridSearchErrorsTest, EmptyValidationThrows) {
  synth::World world;
  EXPECT_THROW(GridSearchWeights(std::span<const CorpusPair>{}, world.table(), resources::DefaultStopwords(),
                                 FastConfig(), 0.25),
               std::invalid_argument);
}

}  // namespace
}  // namespace mls
