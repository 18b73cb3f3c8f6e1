// emocurate/annotation.hpp

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
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emocurate/error.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string msg) {
  if (sink) sink->push_back(std::move(msg));
}

/// A self-confidence score on the 11-level grid {0.0, 0.1, ..., 1.0}, held as
/// an integer number of tenths so that means and equality are exact.
class Confidence {
 public:
  static constexpr int kLevels = 11;

  constexpr Confidence() = default;

  static Confidence from_tenths(int tenths) {
    if (tenths < 0 || tenths >= kLevels)
      throw InputError("confidence level out of range: " + std::to_string(tenths));
    return Confidence(static_cast<std::uint8_t>(tenths));
  }

  /// Snaps a score onto the grid; anything further than 1e-9 from a grid
  /// point is rejected.
  static Confidence from_score(double score) {
    if (!std::isfinite(score) || score < -1e-9 || score > 1.0 + 1e-9)
      throw InputError("confidence score outside [0,1]: " + std::to_string(score));
    const double scaled = score * 10.0;
    const double level = std::round(scaled);
    if (std::abs(scaled - level) > 1e-9 * 10.0)
      throw InputError("confidence score not on the 0.1 grid: " + std::to_string(score));
    return Confidence(static_cast<std::uint8_t>(level));
  }

  int tenths() const { return level_; }
  double value() const { return level_ / 10.0; }

  friend auto operator<=>(Confidence, Confidence) = default;

 private:
  explicit constexpr Confidence(std::uint8_t level) : level_(level) {}
  std::uint8_t level_ = 0;
};

/// One annotator's labeling of one clip.
struct AnnotationRecord {
  std::string video_id;
  std::string annotator_id;
  std::vector<Emotion> labels;
  std::vector<Confidence> scores;  // parallel to labels

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;

  EmotionSet label_set() const {
    EmotionSet s;
    for (Emotion e : labels) s.insert(e);
    return s;
  }

  /// Score attached to category `e`, if labeled.
  std::optional<Confidence> score_for(Emotion e) const {
    for (std::size_t n = 0; n < labels.size(); ++n)
      if (labels[n] == e) return scores[n];
    return std::nullopt;
  }

  void validate() const {
    const std::string where = "record (" + annotator_id + ", " + video_id + ")";
    if (video_id.empty()) throw InputError("record with empty video_id");
    if (annotator_id.empty()) throw InputError("record with empty annotator_id");
    if (labels.empty()) throw InputError(where + ": labels must be nonempty");
    if (labels.size() != scores.size())
      throw InputError(where + ": labels and scores differ in length");
    EmotionSet seen;
    for (Emotion e : labels) {
      if (seen.contains(e)) throw InputError(where + ": duplicate label " + std::string(name(e)));
      seen.insert(e);
    }
  }
};

/// Validated, indexed set of annotation records. Annotators and clips are laid
/// out in sorted id order. Clips listed only in `durations` are part of the
/// corpus with no records.
class AnnotationCorpus {
 public:
  static constexpr std::int32_t kMissing = -1;

  AnnotationCorpus() = default;

  explicit AnnotationCorpus(std::vector<AnnotationRecord> records,
                            std::map<std::string, double> durations = {})
      : records_(std::move(records)), durations_(std::move(durations)) {
    std::set<std::string> annotators;
    std::set<std::string> clips;
    for (const auto& r : records_) {
      r.validate();
      annotators.insert(r.annotator_id);
      clips.insert(r.video_id);
    }
    for (const auto& [id, seconds] : durations_) {
      if (!(seconds > 0.0) || !std::isfinite(seconds))
        throw InputError("duration for " + id + " must be positive, got " + std::to_string(seconds));
      clips.insert(id);
    }
    annotators_.assign(annotators.begin(), annotators.end());
    clips_.assign(clips.begin(), clips.end());
    for (std::size_t i = 0; i < annotators_.size(); ++i) annotator_pos_[annotators_[i]] = i;
    for (std::size_t j = 0; j < clips_.size(); ++j) clip_pos_[clips_[j]] = j;

    cells_.assign(annotators_.size() * clips_.size(), kMissing);
    for (std::size_t n = 0; n < records_.size(); ++n) {
      const auto& r = records_[n];
      auto& cell = cells_[annotator_pos_.at(r.annotator_id) * clips_.size() + clip_pos_.at(r.video_id)];
      if (cell != kMissing)
        throw InputError("duplicate record for (" + r.annotator_id + ", " + r.video_id + ")");
      cell = static_cast<std::int32_t>(n);
    }
  }

  const std::vector<AnnotationRecord>& records() const { return records_; }
  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::vector<std::string>& clips() const { return clips_; }
  const std::map<std::string, double>& durations() const { return durations_; }

  std::size_t num_annotators() const { return annotators_.size(); }
  std::size_t num_clips() const { return clips_.size(); }
  bool empty() const { return clips_.empty(); }

  std::optional<std::size_t> annotator_index(const std::string& id) const {
    auto it = annotator_pos_.find(id);
    if (it == annotator_pos_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> clip_index(const std::string& id) const {
    auto it = clip_pos_.find(id);
    if (it == clip_pos_.end()) return std::nullopt;
    return it->second;
  }

  /// Record of annotator i on clip j, or nullptr when that pair is missing.
  const AnnotationRecord* record(std::size_t i, std::size_t j) const {
    const auto cell = cells_.at(i * clips_.size() + j);
    return cell == kMissing ? nullptr : &records_[static_cast<std::size_t>(cell)];
  }

  std::optional<double> duration(const std::string& video_id) const {
    auto it = durations_.find(video_id);
    if (it == durations_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<AnnotationRecord> records_;
  std::map<std::string, double> durations_;
  std::vector<std::string> annotators_;
  std::vector<std::string> clips_;
  std::map<std::string, std::size_t> annotator_pos_;
  std::map<std::string, std::size_t> clip_pos_;
  std::vector<std::int32_t> cells_;  // M x N, index into records_ or kMissing
};

/// Zero-one annotator x clip matrix for one category, with a coverage mask
/// marking which (annotator, clip) pairs were annotated at all.
class CategoryMatrix {
 public:
  CategoryMatrix() = default;

  CategoryMatrix(Emotion category, std::size_t annotators, std::size_t clips)
      : category_(category), rows_(annotators), cols_(clips),
        entries_(annotators * clips, 0), coverage_(annotators * clips, 0) {}

  /// Builds a matrix from explicit rows; `present` defaults to full coverage.
  /// Cells marked missing must hold 0.
  static CategoryMatrix from_rows(Emotion category, const std::vector<std::vector<int>>& h,
                                  const std::vector<std::vector<int>>& present = {}) {
    const std::size_t m = h.size();
    const std::size_t n = m == 0 ? 0 : h.front().size();
    CategoryMatrix out(category, m, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (h[i].size() != n) throw InputError("ragged matrix rows");
      for (std::size_t j = 0; j < n; ++j) {
        const bool cov = present.empty() ? true : present.at(i).at(j) != 0;
        if (h[i][j] != 0 && h[i][j] != 1) throw InputError("matrix entries must be 0 or 1");
        if (h[i][j] == 1 && !cov) throw InputError("entry 1 on a missing cell");
        out.set(i, j, h[i][j] == 1, cov);
      }
    }
    return out;
  }

  Emotion category() const { return category_; }
  std::size_t num_annotators() const { return rows_; }
  std::size_t num_clips() const { return cols_; }

  int h(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  bool present(std::size_t i, std::size_t j) const { return coverage_[i * cols_ + j] != 0; }

  void set(std::size_t i, std::size_t j, bool label, bool covered) {
    entries_[i * cols_ + j] = (label && covered) ? 1 : 0;
    coverage_[i * cols_ + j] = covered ? 1 : 0;
  }

  std::size_t present_count(std::size_t j) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < rows_; ++i) c += coverage_[i * cols_ + j];
    return c;
  }
  std::size_t positive_count(std::size_t j) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < rows_; ++i) c += entries_[i * cols_ + j];
    return c;
  }

 private:
  Emotion category_ = Emotion::Anger;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> entries_;
  std::vector<std::uint8_t> coverage_;
};

inline CategoryMatrix binarize(const AnnotationCorpus& corpus, Emotion category) {
  CategoryMatrix out(category, corpus.num_annotators(), corpus.num_clips());
  for (std::size_t i = 0; i < corpus.num_annotators(); ++i) {
    for (std::size_t j = 0; j < corpus.num_clips(); ++j) {
      const AnnotationRecord* r = corpus.record(i, j);
      out.set(i, j, r != nullptr && r->label_set().contains(category), r != nullptr);
    }
  }
  return out;
}

/// Strict majority among present annotators; ties and empty columns give 0.
inline std::vector<int> majority_vote_init(const CategoryMatrix& matrix, Warnings* warnings = nullptr) {
  std::vector<int> v(matrix.num_clips(), 0);
  for (std::size_t j = 0; j < matrix.num_clips(); ++j) {
    const std::size_t present = matrix.present_count(j);
    if (present == 0) {
      warn(warnings, "clip " + std::to_string(j) + " has no annotators for " +
                         std::string(name(matrix.category())) + "; initial label set to 0");
      continue;
    }
    v[j] = 2 * matrix.positive_count(j) > present ? 1 : 0;
  }
  return v;
}

inline constexpr double kDefaultClamp = 1e-9;

inline double clamp_probability(double x, double eps = kDefaultClamp) {
  return std::clamp(x, eps, 1.0 - eps);
}

inline double prior_init(std::span<const int> v, double eps = kDefaultClamp) {
  if (v.empty()) throw EmptyCorpusError();
  double sum = 0.0;
  for (int x : v) sum += x;
  return clamp_probability(sum / static_cast<double>(v.size()), eps);
}

}  // namespace emocurate
