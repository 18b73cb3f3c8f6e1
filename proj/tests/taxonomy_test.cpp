// tests/taxonomy_test.cpp

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

#include "emocurate/taxonomy.hpp"

#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

namespace emocurate {
namespace {

TEST(TaxonomyTest, ParsesNamesAndCodes) {
  EXPECT_EQ(parse_category("Anger"), Emotion::Anger);
  EXPECT_EQ(parse_category("hl"), Emotion::Helplessness);
  EXPECT_EQ(parse_category("  disappointment "), Emotion::Disappointment);
  EXPECT_EQ(parse_category("NE"), Emotion::Neutral);
}

TEST(TaxonomyTest, UnknownCategoryNamesToken) {
  try {
    parse_category("Joy");
    FAIL() << "expected UnknownCategoryError";
  } catch (const UnknownCategoryError& e) {
    EXPECT_EQ(e.token(), "Joy");
    EXPECT_NE(std::string(e.what()).find("Joy"), std::string::npos);
  }
}

TEST(TaxonomyTest, VocabularyIsABijection) {
  std::set<std::string_view> names, codes;
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    const Emotion e = kAllEmotions[k];
    EXPECT_EQ(ordinal(e), k);
    names.insert(name(e));
    codes.insert(code(e));
    EXPECT_EQ(parse_category(name(e)), e);
    EXPECT_EQ(parse_category(code(e)), e);
  }
  EXPECT_EQ(names.size(), kNumEmotions);
  EXPECT_EQ(codes.size(), kNumEmotions);
}

TEST(TaxonomyTest, NameCodePairs) {
  const std::vector<std::pair<std::string_view, std::string_view>> expected = {
      {"Anger", "AN"},    {"Disgust", "DI"},  {"Fear", "FE"},         {"Happiness", "HA"},
      {"Neutral", "NE"},  {"Sadness", "SA"},  {"Surprise", "SU"},     {"Contempt", "CO"},
      {"Anxiety", "AX"},  {"Helplessness", "HL"}, {"Disappointment", "DS"}};
  for (std::size_t k = 0; k < kNumEmotions; ++k) {
    EXPECT_EQ(name(kAllEmotions[k]), expected[k].first);
    EXPECT_EQ(code(kAllEmotions[k]), expected[k].second);
  }
}

TEST(CompoundTest, CanonicalNames) {
  EXPECT_EQ(canonical_compound({Emotion::Disgust, Emotion::Anger}).canonical_name(), "Anger,Disgust");
  EXPECT_EQ(canonical_compound({Emotion::Anxiety, Emotion::Fear, Emotion::Surprise}).canonical_name(),
            "Fear,Surprise,Anxiety");
  EXPECT_EQ(canonical_compound({Emotion::Helplessness, Emotion::Sadness}).canonical_name(),
            "Sadness,Helplessness");
}

TEST(CompoundTest, RejectsBadSizesAndNeutral) {
  EXPECT_THROW(canonical_compound({Emotion::Anger}), CompoundSizeError);
  EXPECT_THROW(canonical_compound({Emotion::Anger, Emotion::Fear, Emotion::Sadness, Emotion::Anxiety}),
               CompoundSizeError);
  EXPECT_THROW(canonical_compound({Emotion::Anger, Emotion::Neutral}), NeutralInCompoundError);
  EXPECT_THROW(canonical_compound({Emotion::Anger, Emotion::Anger}), InputError);
}

TEST(CompoundTest, ParsesSpacedNames) {
  EXPECT_EQ(parse_compound("Fear, Surprise, Anxiety"),
            canonical_compound({Emotion::Fear, Emotion::Surprise, Emotion::Anxiety}));
  EXPECT_THROW(parse_compound("Fear,Joy"), UnknownCategoryError);
}

// Every 2- and 3-member subset of the non-Neutral categories, in every order.
TEST(CompoundTest, CanonicalNameIsOrderInsensitive) {
  std::vector<Emotion> pool;
  for (Emotion e : kAllEmotions)
    if (e != Emotion::Neutral) pool.push_back(e);
  std::size_t subsets = 0;
  for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 2 || size > 3) continue;
    std::vector<Emotion> members;
    for (std::size_t b = 0; b < pool.size(); ++b)
      if (mask & (1u << b)) members.push_back(pool[b]);
    const std::string expected = canonical_compound(members).canonical_name();
    do {
      EXPECT_EQ(canonical_compound(members).canonical_name(), expected);
    } while (std::next_permutation(members.begin(), members.end()));
    ++subsets;
  }
  EXPECT_EQ(subsets, 45u + 120u);
}

TEST(CompoundTest, OrderingFollowsMembers) {
  const auto an_di = canonical_compound({Emotion::Anger, Emotion::Disgust});
  const auto an_di_ax = canonical_compound({Emotion::Anger, Emotion::Disgust, Emotion::Anxiety});
  const auto sa_hl = canonical_compound({Emotion::Sadness, Emotion::Helplessness});
  EXPECT_LT(an_di, an_di_ax);
  EXPECT_LT(an_di_ax, sa_hl);
}

}  // namespace
}  // namespace emocurate
