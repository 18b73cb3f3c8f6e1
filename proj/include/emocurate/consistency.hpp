// emocurate/consistency.hpp

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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emocurate/error.hpp"
#include "emocurate/label_policy.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

namespace detail {
inline double sample_variance(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}
}  // namespace detail

/// Cronbach's alpha with items as rows and subjects as columns:
///   alpha = m/(m-1) * (1 - sum_i var(item_i) / var(subject totals))
/// using sample (n-1) variances.
inline double cronbach_alpha(const std::vector<std::vector<double>>& items) {
  const std::size_t m = items.size();
  if (m < 2) throw UndefinedAlphaError("Cronbach's alpha needs at least 2 items");
  const std::size_t n = items.front().size();
  if (n < 2) throw UndefinedAlphaError("Cronbach's alpha needs at least 2 subjects");

  std::vector<double> totals(n, 0.0);
  double item_var_sum = 0.0;
  for (const auto& item : items) {
    if (item.size() != n) throw InputError("ragged item matrix");
    item_var_sum += detail::sample_variance(item);
    for (std::size_t j = 0; j < n; ++j) totals[j] += item[j];
  }
  const double total_var = detail::sample_variance(totals);
  if (!(total_var > 0.0)) throw UndefinedAlphaError("zero total variance");
  const double md = static_cast<double>(m);
  return md / (md - 1.0) * (1.0 - item_var_sum / total_var);
}

struct CategoryConsistency {
  std::optional<double> alpha;
  std::size_t items_used = 0;
  std::size_t subjects_used = 0;
  std::string undefined_reason;
};

struct ConsistencyReport {
  std::map<Emotion, CategoryConsistency> categories;

  /// Mean alpha over categories where it is defined.
  std::optional<double> average() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [k, c] : categories) {
      if (c.alpha) {
        sum += *c.alpha;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

/// Per category, the items are the annotators who met the reliability
/// threshold for it and the subjects are clips on which all of them have a
/// retained record. Scores are binary label indicators.
inline ConsistencyReport consistency_report(const RetainedCorpus& retained) {
  ConsistencyReport report;
  const std::size_t m = retained.annotators().size();
  for (Emotion k : kAllEmotions) {
    CategoryConsistency& cc = report.categories[k];
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < m; ++i)
      if (retained.qualified(i, k)) items.push_back(i);
    cc.items_used = items.size();

    std::vector<std::vector<double>> scores(items.size());
    for (const auto& clip : retained.clips()) {
      std::vector<double> column;
      column.reserve(items.size());
      for (std::size_t i : items) {
        auto it = std::lower_bound(clip.annotators.begin(), clip.annotators.end(), i);
        if (it == clip.annotators.end() || *it != i) break;
        const auto& rec = clip.records[static_cast<std::size_t>(it - clip.annotators.begin())];
        column.push_back(rec.label_set().contains(k) ? 1.0 : 0.0);
      }
      if (column.size() != items.size()) continue;
      for (std::size_t n = 0; n < items.size(); ++n) scores[n].push_back(column[n]);
      ++cc.subjects_used;
    }

    if (items.size() < 2) {
      cc.undefined_reason = "fewer than 2 retained annotators";
      continue;
    }
    try {
      cc.alpha = cronbach_alpha(scores);
    } catch (const UndefinedAlphaError& e) {
      cc.undefined_reason = e.what();
    }
  }
  return report;
}

}  // namespace emocurate
