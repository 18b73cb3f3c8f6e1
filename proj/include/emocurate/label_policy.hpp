// emocurate/label_policy.hpp

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

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emocurate/annotation.hpp"
#include "emocurate/error.hpp"
#include "emocurate/reliability_em.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

struct RetentionPolicy {
  std::size_t min_retained_per_clip = 5;
  double reliability_threshold = 0.7;  // applied to (alpha + beta) / 2

  void validate() const {
    if (min_retained_per_clip < 1) throw InputError("min_retained_per_clip must be at least 1");
    if (!(reliability_threshold >= 0.0 && reliability_threshold <= 1.0))
      throw InputError("reliability_threshold must lie in [0, 1]");
  }
};

struct SelectionPolicy {
  double confidence_threshold = 0.5;
  std::size_t min_category_count = 10;  // compounds need strictly more members

  void validate() const {
    if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0))
      throw InputError("confidence_threshold must lie in [0, 1]");
  }
};

/// Retained annotations of one clip. Records may carry an empty label list: the
/// annotator is retained but none of its labels survived the per-category
/// filter, which still counts as a vote against every category.
struct RetainedClip {
  std::string video_id;
  std::vector<std::size_t> annotators;  // corpus annotator indices, ascending
  std::vector<AnnotationRecord> records;  // parallel to annotators
  std::size_t present = 0;  // annotators who labeled the clip before retention
  bool fallback = false;    // the per-clip floor replaced the threshold rule
};

class RetainedCorpus {
 public:
  RetainedCorpus() = default;
  RetainedCorpus(std::vector<std::string> annotators,
                 std::array<std::vector<bool>, kNumEmotions> qualified,
                 std::vector<RetainedClip> clips)
      : annotators_(std::move(annotators)), qualified_(std::move(qualified)),
        clips_(std::move(clips)) {}

  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::vector<RetainedClip>& clips() const { return clips_; }

  /// Whether annotator i met the reliability threshold on category k.
  bool qualified(std::size_t i, Emotion k) const { return qualified_[ordinal(k)][i]; }

 private:
  std::vector<std::string> annotators_;
  std::array<std::vector<bool>, kNumEmotions> qualified_;
  std::vector<RetainedClip> clips_;
};

/// Keeps, per clip and category, the labels of annotators whose balanced
/// reliability on that category reaches the threshold. A clip left with fewer
/// than `min_retained_per_clip` annotators instead keeps the top annotators by
/// mean balanced reliability (ties by annotator order), with all their labels.
inline RetainedCorpus retain_labels(const AnnotationCorpus& corpus, const ReliabilityReport& report,
                                    const RetentionPolicy& policy = {}) {
  policy.validate();
  const std::size_t m = corpus.num_annotators();
  if (m < policy.min_retained_per_clip)
    throw PolicyInfeasibleError("corpus has " + std::to_string(m) + " annotator(s), fewer than " +
                                "the required " + std::to_string(policy.min_retained_per_clip));
  if (report.annotators() != corpus.annotators())
    throw InputError("reliability report does not cover the corpus annotators");

  std::array<std::vector<bool>, kNumEmotions> qualified;
  std::vector<bool> any_qualified(m, false);
  for (Emotion k : kAllEmotions) {
    qualified[ordinal(k)].assign(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      const auto b = report.balanced_reliability(i, k);
      if (b && *b >= policy.reliability_threshold) {
        qualified[ordinal(k)][i] = true;
        any_qualified[i] = true;
      }
    }
  }

  std::vector<double> mean_reliability(m);
  for (std::size_t i = 0; i < m; ++i) mean_reliability[i] = report.mean_balanced_reliability(i);

  std::vector<RetainedClip> clips;
  clips.reserve(corpus.num_clips());
  for (std::size_t j = 0; j < corpus.num_clips(); ++j) {
    RetainedClip rc;
    rc.video_id = corpus.clips()[j];
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < m; ++i)
      if (corpus.record(i, j)) present.push_back(i);
    rc.present = present.size();

    std::vector<std::size_t> kept;
    for (std::size_t i : present)
      if (any_qualified[i]) kept.push_back(i);

    if (kept.size() < policy.min_retained_per_clip) {
      rc.fallback = true;
      std::stable_sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
        return mean_reliability[a] > mean_reliability[b];
      });
      present.resize(std::min(present.size(), policy.min_retained_per_clip));
      std::sort(present.begin(), present.end());
      for (std::size_t i : present) {
        rc.annotators.push_back(i);
        rc.records.push_back(*corpus.record(i, j));
      }
    } else {
      for (std::size_t i : kept) {
        const AnnotationRecord& src = *corpus.record(i, j);
        AnnotationRecord filtered{src.video_id, src.annotator_id, {}, {}};
        for (std::size_t n = 0; n < src.labels.size(); ++n) {
          if (qualified[ordinal(src.labels[n])][i]) {
            filtered.labels.push_back(src.labels[n]);
            filtered.scores.push_back(src.scores[n]);
          }
        }
        rc.annotators.push_back(i);
        rc.records.push_back(std::move(filtered));
      }
    }
    clips.push_back(std::move(rc));
  }
  return RetainedCorpus(corpus.annotators(), std::move(qualified), std::move(clips));
}

/// Category k is valid when at least half of the clip's retained annotators
/// labeled it and their mean confidence reaches the threshold.
inline std::map<Emotion, double> valid_labels(const RetainedClip& clip,
                                              double confidence_threshold = 0.5) {
  std::map<Emotion, double> out;
  const std::size_t m_clip = clip.records.size();
  if (m_clip == 0) return out;
  std::array<std::size_t, kNumEmotions> count{};
  std::array<int, kNumEmotions> tenths{};
  for (const auto& r : clip.records) {
    for (std::size_t n = 0; n < r.labels.size(); ++n) {
      ++count[ordinal(r.labels[n])];
      tenths[ordinal(r.labels[n])] += r.scores[n].tenths();
    }
  }
  for (Emotion k : kAllEmotions) {
    const std::size_t c = count[ordinal(k)];
    if (c == 0 || 2 * c < m_clip) continue;
    const double c_mean = tenths[ordinal(k)] / (10.0 * static_cast<double>(c));
    if (c_mean >= confidence_threshold) out[k] = c_mean;
  }
  return out;
}

class NoValidLabelError : public Error {
 public:
  NoValidLabelError() : Error("no valid label to choose a predominant expression from") {}
};

/// Highest mean confidence wins; ties go to the lower category ordinal.
inline Emotion assign_single(const std::map<Emotion, double>& valid) {
  if (valid.empty()) throw NoValidLabelError();
  auto best = valid.begin();
  for (auto it = std::next(valid.begin()); it != valid.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

enum class Disposition { SingleOnly, SingleAndMultiple, Excluded };

inline std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::SingleOnly: return "single_only";
    case Disposition::SingleAndMultiple: return "single_and_multiple";
    case Disposition::Excluded: return "excluded";
  }
  return "unknown";
}

struct ClipDecision {
  std::string video_id;
  std::map<Emotion, double> valid_labels;  // category -> c_mean
  std::optional<Emotion> single_label;
  std::optional<CompoundCategory> candidate_compound;  // before count pruning
  std::optional<CompoundCategory> compound_label;
  Disposition disposition = Disposition::Excluded;
  std::string note;  // exclusion reason or why no compound was formed

  friend bool operator==(const ClipDecision&, const ClipDecision&) = default;
};

struct ExcludedClip {
  std::string video_id;
  std::string reason;
  friend bool operator==(const ExcludedClip&, const ExcludedClip&) = default;
};

struct CuratedDataset {
  std::map<Emotion, std::vector<std::string>> single_set;
  std::map<CompoundCategory, std::vector<std::string>> multiple_set;
  std::vector<ExcludedClip> excluded;
  std::vector<ClipDecision> decisions;  // one per clip, corpus order
  std::size_t min_category_count = 10;

  friend bool operator==(const CuratedDataset&, const CuratedDataset&) = default;
};

/// Decision for one retained clip before compound pruning.
inline ClipDecision decide_clip(const RetainedClip& clip, const SelectionPolicy& selection = {}) {
  ClipDecision d;
  d.video_id = clip.video_id;
  if (clip.records.empty()) {
    d.note = "no retained annotators";
    return d;
  }
  d.valid_labels = valid_labels(clip, selection.confidence_threshold);
  if (d.valid_labels.empty()) {
    d.note = "no valid label";
    return d;
  }
  d.single_label = assign_single(d.valid_labels);
  d.disposition = Disposition::SingleOnly;

  EmotionSet members;
  for (const auto& [k, c_mean] : d.valid_labels)
    if (k != Emotion::Neutral) members.insert(k);
  if (d.valid_labels.size() >= 2) {
    if (members.size() < CompoundCategory::kMinMembers) {
      d.note = "Neutral removed from compound";
    } else if (members.size() > CompoundCategory::kMaxMembers) {
      d.note = "more than " + std::to_string(CompoundCategory::kMaxMembers) +
               " valid labels; no compound";
    } else {
      d.candidate_compound = CompoundCategory(members);
    }
  }
  return d;
}

/// Prunes compounds with at most `min_category_count` clips and builds the
/// single and multiple sets. Applying it to its own decisions is a fixed point.
inline CuratedDataset assemble(std::vector<ClipDecision> decisions, std::size_t min_category_count) {
  std::map<CompoundCategory, std::size_t> counts;
  for (const auto& d : decisions)
    if (d.candidate_compound) ++counts[*d.candidate_compound];

  CuratedDataset out;
  out.min_category_count = min_category_count;
  for (auto& d : decisions) {
    d.compound_label.reset();
    if (!d.single_label) {
      d.disposition = Disposition::Excluded;
      out.excluded.push_back({d.video_id, d.note});
      continue;
    }
    out.single_set[*d.single_label].push_back(d.video_id);
    d.disposition = Disposition::SingleOnly;
    if (d.candidate_compound && counts[*d.candidate_compound] > min_category_count) {
      d.compound_label = d.candidate_compound;
      d.disposition = Disposition::SingleAndMultiple;
      out.multiple_set[*d.compound_label].push_back(d.video_id);
    }
  }
  for (auto& [k, ids] : out.single_set) std::sort(ids.begin(), ids.end());
  for (auto& [c, ids] : out.multiple_set) std::sort(ids.begin(), ids.end());
  std::sort(out.excluded.begin(), out.excluded.end(),
            [](const ExcludedClip& a, const ExcludedClip& b) { return a.video_id < b.video_id; });
  out.decisions = std::move(decisions);
  return out;
}

inline CuratedDataset curate(const RetainedCorpus& retained, const SelectionPolicy& selection = {}) {
  selection.validate();
  std::vector<ClipDecision> decisions;
  decisions.reserve(retained.clips().size());
  for (const auto& clip : retained.clips()) decisions.push_back(decide_clip(clip, selection));
  return assemble(std::move(decisions), selection.min_category_count);
}

inline CuratedDataset curate(const AnnotationCorpus& corpus, const ReliabilityReport& report,
                             const RetentionPolicy& retention = {},
                             const SelectionPolicy& selection = {}) {
  return curate(retain_labels(corpus, report, retention), selection);
}

}  // namespace emocurate
