// emocurate/annotator_sim.hpp

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
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "emocurate/annotation.hpp"
#include "emocurate/error.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

using CategoryValues = std::array<double, kNumEmotions>;

inline CategoryValues filled(double x) {
  CategoryValues v;
  v.fill(x);
  return v;
}

/// Weights over the 11 confidence levels 0.0, 0.1, ..., 1.0.
using ConfidenceWeights = std::array<double, Confidence::kLevels>;

struct DurationModel {
  double log_median = 1.0986122886681098;  // ln 3 s
  double log_sigma = 0.7;
  double min_seconds = 0.5;
  double max_seconds = 30.0;
};

struct SimConfig {
  std::size_t n_annotators = 11;
  std::size_t n_clips = 1000;
  std::uint64_t seed = 0;
  CategoryValues prevalence = filled(0.3);
  // Per annotator, per category ground-truth reliabilities. Empty means every
  // annotator uses `default_alpha` / `default_beta`.
  std::vector<CategoryValues> alpha;
  std::vector<CategoryValues> beta;
  double default_alpha = 0.85;
  double default_beta = 0.85;
  // Labels that agree with the truth draw from `consistent`, false positives
  // from `inconsistent`.
  ConfidenceWeights consistent = {0, 0, 0, 0, 0, 0, 1, 2, 3, 3, 2};
  ConfidenceWeights inconsistent = {1, 1, 2, 2, 2, 2, 0, 0, 0, 0, 0};
  DurationModel duration;

  double alpha_of(std::size_t i, Emotion k) const {
    return alpha.empty() ? default_alpha : alpha[i][ordinal(k)];
  }
  double beta_of(std::size_t i, Emotion k) const {
    return beta.empty() ? default_beta : beta[i][ordinal(k)];
  }

  void validate() const {
    if (n_annotators < 1) throw InputError("simulation needs at least 1 annotator");
    if (n_clips < 1) throw InputError("simulation needs at least 1 clip");
    auto check_prob = [](double x, const char* what) {
      if (!(x >= 0.0 && x <= 1.0)) throw InputError(fmt::format("{} must lie in [0, 1], got {}", what, x));
    };
    for (double x : prevalence) check_prob(x, "prevalence");
    check_prob(default_alpha, "alpha");
    check_prob(default_beta, "beta");
    if (!alpha.empty() && alpha.size() != n_annotators)
      throw InputError("alpha table must have one row per annotator");
    if (!beta.empty() && beta.size() != n_annotators)
      throw InputError("beta table must have one row per annotator");
    for (const auto& row : alpha) for (double x : row) check_prob(x, "alpha");
    for (const auto& row : beta) for (double x : row) check_prob(x, "beta");
    for (const auto* w : {&consistent, &inconsistent}) {
      double total = 0.0;
      for (double x : *w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("confidence weights must be non-negative");
        total += x;
      }
      if (!(total > 0.0)) throw InputError("confidence weights must not all be zero");
    }
    if (!(duration.min_seconds > 0.0 && duration.max_seconds >= duration.min_seconds))
      throw InputError("duration bounds must satisfy 0 < min <= max");
    if (!(duration.log_sigma >= 0.0)) throw InputError("duration sigma must be non-negative");
  }
};

/// Counter-based generator: every draw is a pure function of the seed and the
/// indices it belongs to, so output does not depend on iteration order.
class CounterRng {
 public:
  enum class Stream : std::uint64_t { Truth = 1, Label = 2, Confidence = 3, Duration = 4 };

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(Stream s, std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    std::uint64_t h = mix(seed_);
    h = mix(h ^ static_cast<std::uint64_t>(s));
    h = mix(h ^ a);
    h = mix(h ^ b);
    return mix(h ^ c);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(Stream s, std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return static_cast<double>(bits(s, a, b, c) >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // SplitMix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t seed_;
};

struct SimResult {
  AnnotationCorpus corpus;
  std::vector<EmotionSet> truth;  // per clip, in corpus clip order
};

inline std::string sim_annotator_id(std::size_t i, std::size_t m) {
  const int width = std::max<int>(2, static_cast<int>(std::to_string(m).size()));
  return fmt::format("A{:0{}}", i + 1, width);
}

inline std::string sim_clip_id(std::size_t j, std::size_t n) {
  const int width = std::max<int>(5, static_cast<int>(std::to_string(n).size()));
  return fmt::format("{:0{}}.mp4", j + 1, width);
}

namespace detail {
inline Confidence sample_confidence(const ConfidenceWeights& w, double u) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double acc = 0.0;
  int last = 0;
  for (int level = 0; level < Confidence::kLevels; ++level) {
    if (w[level] <= 0.0) continue;
    last = level;
    acc += w[level] / total;
    if (u < acc) return Confidence::from_tenths(level);
  }
  return Confidence::from_tenths(last);
}
}  // namespace detail

/// Forward-samples the two-parameter annotator model: v ~ Bernoulli(p*) per
/// clip and category, then h = 1 with probability alpha* if v = 1 and
/// 1 - beta* if v = 0. Records with no labels are omitted.
inline SimResult simulate(const SimConfig& config) {
  config.validate();
  const CounterRng rng(config.seed);
  using S = CounterRng::Stream;
  const std::size_t m = config.n_annotators;
  const std::size_t n = config.n_clips;

  std::vector<EmotionSet> truth(n);
  std::map<std::string, double> durations;
  for (std::size_t j = 0; j < n; ++j) {
    for (Emotion k : kAllEmotions)
      if (rng.uniform(S::Truth, j, ordinal(k), 0) < config.prevalence[ordinal(k)]) truth[j].insert(k);

    // Box-Muller on two independent draws.
    const double u1 = 1.0 - rng.uniform(S::Duration, j, 0, 0);
    const double u2 = rng.uniform(S::Duration, j, 1, 0);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    double seconds = std::exp(config.duration.log_median + config.duration.log_sigma * z);
    seconds = std::clamp(seconds, config.duration.min_seconds, config.duration.max_seconds);
    durations[sim_clip_id(j, n)] = std::round(seconds * 100.0) / 100.0;
  }

  std::vector<AnnotationRecord> records;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      AnnotationRecord r{sim_clip_id(j, n), sim_annotator_id(i, m), {}, {}};
      for (Emotion k : kAllEmotions) {
        const bool v = truth[j].contains(k);
        const double u = rng.uniform(S::Label, i, j, ordinal(k));
        const bool h = v ? u < config.alpha_of(i, k) : u < 1.0 - config.beta_of(i, k);
        if (!h) continue;
        const double uc = rng.uniform(S::Confidence, i, j, ordinal(k));
        r.labels.push_back(k);
        r.scores.push_back(detail::sample_confidence(v ? config.consistent : config.inconsistent, uc));
      }
      if (!r.labels.empty()) records.push_back(std::move(r));
    }
  }
  return {AnnotationCorpus(std::move(records), std::move(durations)), std::move(truth)};
}

}  // namespace emocurate
