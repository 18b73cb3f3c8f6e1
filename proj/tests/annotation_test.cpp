// tests/annotation_test.cpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "emocurate/annotation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "emocurate/annotator_sim.hpp"

namespace emocurate {
namespace {

AnnotationRecord rec(std::string video, std::string annotator, std::vector<Emotion> labels,
                     std::vector<double> scores) {
  AnnotationRecord r{std::move(video), std::move(annotator), std::move(labels), {}};
  for (double s : scores) r.scores.push_back(Confidence::from_score(s));
  return r;
}

TEST(ConfidenceTest, ElevenLevelGrid) {
  for (int t = 0; t <= 10; ++t) {
    const Confidence c = Confidence::from_score(t / 10.0);
    EXPECT_EQ(c.tenths(), t);
  }
  EXPECT_EQ(Confidence::from_score(0.30000000000000004).tenths(), 3);
  EXPECT_THROW(Confidence::from_score(0.55), InputError);
  EXPECT_THROW(Confidence::from_score(1.1), InputError);
  EXPECT_THROW(Confidence::from_score(-0.1), InputError);
  EXPECT_THROW(Confidence::from_tenths(11), InputError);
}

TEST(AnnotationRecordTest, ValidationErrors) {
  EXPECT_THROW(rec("v", "a", {}, {}).validate(), InputError);
  EXPECT_THROW(rec("v", "a", {Emotion::Anger, Emotion::Anger}, {0.5, 0.5}).validate(), InputError);
  AnnotationRecord r = rec("v", "a", {Emotion::Anger}, {0.5});
  r.scores.push_back(Confidence::from_tenths(3));
  EXPECT_THROW(r.validate(), InputError);
  EXPECT_THROW(rec("", "a", {Emotion::Anger}, {0.5}).validate(), InputError);
}

TEST(AnnotationCorpusTest, RejectsDuplicatePairs) {
  std::vector<AnnotationRecord> records = {rec("v1", "a", {Emotion::Anger}, {0.5}),
                                           rec("v1", "a", {Emotion::Fear}, {0.5})};
  EXPECT_THROW(AnnotationCorpus{records}, InputError);
}

TEST(AnnotationCorpusTest, SortedIndexesAndMetadataOnlyClips) {
  AnnotationCorpus corpus({rec("v2", "b", {Emotion::Anger}, {0.5}), rec("v1", "a", {Emotion::Fear}, {0.5})},
                          {{"v3", 2.5}, {"v1", 1.0}});
  EXPECT_EQ(corpus.annotators(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(corpus.clips(), (std::vector<std::string>{"v1", "v2", "v3"}));
  EXPECT_EQ(corpus.record(0, 2), nullptr);
  ASSERT_NE(corpus.record(1, 1), nullptr);
  EXPECT_EQ(corpus.record(1, 1)->video_id, "v2");
  EXPECT_THROW(AnnotationCorpus({}, {{"v", 0.0}}), InputError);
}

TEST(BinarizeTest, PaperRecordExample) {
  AnnotationCorpus corpus({rec("05237.mp4", "a1", {Emotion::Disgust, Emotion::Contempt}, {0.6, 1.0})});
  EXPECT_EQ(binarize(corpus, Emotion::Disgust).h(0, 0), 1);
  EXPECT_EQ(binarize(corpus, Emotion::Contempt).h(0, 0), 1);
  const CategoryMatrix anger = binarize(corpus, Emotion::Anger);
  EXPECT_EQ(anger.h(0, 0), 0);
  EXPECT_TRUE(anger.present(0, 0));
}

TEST(BinarizeTest, ClipWithoutRecordsIsAllMissing) {
  AnnotationCorpus corpus({rec("v1", "a", {Emotion::Anger}, {0.5}), rec("v1", "b", {Emotion::Anger}, {0.5})},
                          {{"v1", 1.0}, {"v2", 3.0}});
  const CategoryMatrix m = binarize(corpus, Emotion::Anger);
  ASSERT_EQ(m.num_clips(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(m.h(i, 1), 0);
    EXPECT_FALSE(m.present(i, 1));
  }
}

// Row sums over all categories equal each annotator's total label count.
TEST(BinarizeTest, LabelsAreConserved) {
  SimConfig cfg;
  cfg.n_annotators = 7;
  cfg.n_clips = 200;
  cfg.seed = 5;
  const AnnotationCorpus corpus = simulate(cfg).corpus;
  std::vector<std::size_t> from_matrix(corpus.num_annotators(), 0);
  for (Emotion k : kAllEmotions) {
    const CategoryMatrix m = binarize(corpus, k);
    for (std::size_t i = 0; i < m.num_annotators(); ++i)
      for (std::size_t j = 0; j < m.num_clips(); ++j) {
        ASSERT_TRUE(m.h(i, j) == 0 || m.h(i, j) == 1);
        if (m.h(i, j) == 1) {
          ASSERT_TRUE(m.present(i, j));
        }
        from_matrix[i] += static_cast<std::size_t>(m.h(i, j));
      }
  }
  std::vector<std::size_t> from_records(corpus.num_annotators(), 0);
  for (const auto& r : corpus.records()) from_records[*corpus.annotator_index(r.annotator_id)] += r.labels.size();
  EXPECT_EQ(from_matrix, from_records);
}

TEST(MajorityVoteTest, Examples) {
  EXPECT_EQ(majority_vote_init(CategoryMatrix::from_rows(Emotion::Anger, {{1}, {1}, {0}})), std::vector<int>{1});
  EXPECT_EQ(majority_vote_init(CategoryMatrix::from_rows(Emotion::Anger, {{1}, {1}, {0}, {0}})), std::vector<int>{0});
  EXPECT_EQ(majority_vote_init(CategoryMatrix::from_rows(Emotion::Anger, {{0}, {0}, {0}})), std::vector<int>{0});
}

TEST(MajorityVoteTest, CountsOnlyPresentAnnotators) {
  // 2 of 3 present annotators vote yes; the fourth is missing.
  const auto m = CategoryMatrix::from_rows(Emotion::Fear, {{1}, {1}, {0}, {0}}, {{1}, {1}, {1}, {0}});
  EXPECT_EQ(majority_vote_init(m), std::vector<int>{1});
}

TEST(MajorityVoteTest, EmptyColumnWarns) {
  const auto m = CategoryMatrix::from_rows(Emotion::Fear, {{0, 1}, {0, 1}}, {{0, 1}, {0, 1}});
  Warnings w;
  EXPECT_EQ(majority_vote_init(m, &w), (std::vector<int>{0, 1}));
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("no annotators"), std::string::npos);
}

TEST(MajorityVoteTest, InvariantUnderAnnotatorPermutation) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + gen() % 8, n = 1 + gen() % 10;
    std::vector<std::vector<int>> h(m, std::vector<int>(n)), cov(m, std::vector<int>(n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        cov[i][j] = gen() % 4 != 0;
        h[i][j] = cov[i][j] ? static_cast<int>(gen() % 2) : 0;
      }
    const auto base = majority_vote_init(CategoryMatrix::from_rows(Emotion::Anger, h, cov));
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<std::vector<int>> hp, cp;
    for (std::size_t i : perm) {
      hp.push_back(h[i]);
      cp.push_back(cov[i]);
    }
    EXPECT_EQ(majority_vote_init(CategoryMatrix::from_rows(Emotion::Anger, hp, cp)), base);
  }
}

TEST(PriorInitTest, MeanWithClamping) {
  EXPECT_DOUBLE_EQ(prior_init(std::vector<int>{1, 0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(prior_init(std::vector<int>{0, 0, 0}), kDefaultClamp);
  EXPECT_DOUBLE_EQ(prior_init(std::vector<int>{1, 1}), 1.0 - kDefaultClamp);
  EXPECT_THROW(prior_init(std::vector<int>{}), EmptyCorpusError);
}

}  // namespace
}  // namespace emocurate
