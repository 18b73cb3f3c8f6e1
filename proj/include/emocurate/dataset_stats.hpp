// emocurate/dataset_stats.hpp

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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "emocurate/error.hpp"
#include "emocurate/label_policy.hpp"
#include "emocurate/output_format.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

inline constexpr std::size_t kNumBuckets = 3;
inline constexpr std::array<const char*, kNumBuckets> kBucketLabels = {"0-2s", "2-5s", "5s+"};

/// Half-open buckets [0,2), [2,5), [5,inf).
inline std::size_t duration_bucket(double seconds) {
  if (seconds < 2.0) return 0;
  if (seconds < 5.0) return 1;
  return 2;
}

using BucketCounts = std::array<std::size_t, kNumBuckets>;

struct DistributionRow {
  std::string category;
  BucketCounts buckets{};
  std::size_t total = 0;
  std::int64_t percent_hundredths = 0;  // percent * 100, exact

  double percent() const { return static_cast<double>(percent_hundredths) / 100.0; }
};

struct DistributionTable {
  std::vector<DistributionRow> rows;
  BucketCounts bucket_totals{};
  std::size_t grand_total = 0;
};

namespace detail {

// Hundredths of a percent, rounded half-up. If the rounded column misses 100.00
// by more than 0.01, the rows whose rounding moved furthest in the offending
// direction are stepped back one unit until it is within 0.01.
inline void assign_percents(DistributionTable& table) {
  if (table.grand_total == 0) return;
  const auto grand = static_cast<std::uint64_t>(table.grand_total);
  const std::size_t n = table.rows.size();
  std::vector<std::uint64_t> rem(n);
  std::int64_t sum = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(table.rows[r].total) * 10000u;
    rem[r] = scaled % grand;
    auto units = static_cast<std::int64_t>(scaled / grand);
    if (2 * rem[r] >= grand) ++units;
    table.rows[r].percent_hundredths = units;
    sum += units;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t r = 0; r < n; ++r) order[r] = r;
  if (sum > 10001) {
    // Undo the round-ups with the smallest remainders.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] < rem[b]; });
    for (std::size_t r : order) {
      if (sum <= 10001) break;
      if (2 * rem[r] >= grand && rem[r] != 0) {
        --table.rows[r].percent_hundredths;
        --sum;
      }
    }
  } else if (sum < 9999) {
    // Round up the round-downs with the largest remainders.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t r : order) {
      if (sum >= 9999) break;
      if (2 * rem[r] < grand && rem[r] != 0) {
        ++table.rows[r].percent_hundredths;
        ++sum;
      }
    }
  }
}

template <typename Key>
DistributionTable build_distribution(const std::map<Key, std::vector<std::string>>& sets,
                                     const std::map<std::string, double>& durations,
                                     auto&& label_of) {
  std::vector<std::string> missing;
  DistributionTable table;
  std::vector<std::pair<Key, DistributionRow>> keyed;
  for (const auto& [key, ids] : sets) {
    DistributionRow row;
    row.category = label_of(key);
    for (const auto& id : ids) {
      auto it = durations.find(id);
      if (it == durations.end() || !(it->second > 0.0)) {
        missing.push_back(id);
        continue;
      }
      ++row.buckets[duration_bucket(it->second)];
      ++row.total;
    }
    keyed.emplace_back(key, std::move(row));
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw MissingDurationError(std::move(missing));
  }
  // Descending total, then category order (map order of the keys).
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.second.total > b.second.total; });
  for (auto& [key, row] : keyed) {
    for (std::size_t b = 0; b < kNumBuckets; ++b) table.bucket_totals[b] += row.buckets[b];
    table.grand_total += row.total;
    table.rows.push_back(std::move(row));
  }
  assign_percents(table);
  return table;
}

}  // namespace detail

inline DistributionTable single_distribution(const CuratedDataset& dataset,
                                             const std::map<std::string, double>& durations) {
  return detail::build_distribution(dataset.single_set, durations,
                                    [](Emotion e) { return std::string(name(e)); });
}

inline DistributionTable multiple_distribution(const CuratedDataset& dataset,
                                               const std::map<std::string, double>& durations) {
  return detail::build_distribution(dataset.multiple_set, durations,
                                    [](const CompoundCategory& c) { return c.canonical_name(); });
}

inline std::string format_percent(std::int64_t hundredths) {
  return fmt::format("{}.{:02}", hundredths / 100, hundredths % 100);
}

inline std::string render_markdown(const DistributionTable& t) {
  std::string out = "| Expressions | 0-2s | 2-5s | 5s+ | Total | Percent(%) |\n";
  out += "|---|---|---|---|---|---|\n";
  for (const auto& r : t.rows)
    out += fmt::format("| {} | {} | {} | {} | {} | {} |\n", r.category, r.buckets[0], r.buckets[1],
                       r.buckets[2], r.total, format_percent(r.percent_hundredths));
  out += fmt::format("| Total | {} | {} | {} | {} | {} |\n", t.bucket_totals[0], t.bucket_totals[1],
                     t.bucket_totals[2], t.grand_total, t.grand_total > 0 ? "100.00" : "0.00");
  return out;
}

inline std::string render_csv(const DistributionTable& t) {
  std::string out = "Expressions,0-2s,2-5s,5s+,Total,Percent(%)\n";
  for (const auto& r : t.rows)
    out += fmt::format("{},{},{},{},{},{}\n", csv_field(r.category), r.buckets[0], r.buckets[1],
                       r.buckets[2], r.total, format_percent(r.percent_hundredths));
  out += fmt::format("Total,{},{},{},{},{}\n", t.bucket_totals[0], t.bucket_totals[1], t.bucket_totals[2],
                     t.grand_total, t.grand_total > 0 ? "100.00" : "0.00");
  return out;
}

inline nlohmann::json to_json(const DistributionTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"category", r.category},
                    {"0-2s", r.buckets[0]},
                    {"2-5s", r.buckets[1]},
                    {"5s+", r.buckets[2]},
                    {"total", r.total},
                    {"percent", r.percent()}});
  }
  return {{"rows", rows},
          {"total",
           {{"0-2s", t.bucket_totals[0]},
            {"2-5s", t.bucket_totals[1]},
            {"5s+", t.bucket_totals[2]},
            {"total", t.grand_total}}}};
}

inline std::string render(const DistributionTable& t, OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return to_json(t).dump(2) + "\n";
    case OutputFormat::Csv: return render_csv(t);
    case OutputFormat::Markdown: return render_markdown(t);
  }
  return {};
}

}  // namespace emocurate
