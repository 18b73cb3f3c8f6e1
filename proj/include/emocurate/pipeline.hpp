// emocurate/pipeline.hpp

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

// Subcommand bodies shared by the CLI and the integration tests. Each returns
// the process exit status: 0 success, 1 input error, 2 policy infeasible,
// 3 numerical failure.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "emocurate/annotation.hpp"
#include "emocurate/annotator_sim.hpp"
#include "emocurate/consistency.hpp"
#include "emocurate/dataset_stats.hpp"
#include "emocurate/error.hpp"
#include "emocurate/io.hpp"
#include "emocurate/label_policy.hpp"
#include "emocurate/output_format.hpp"
#include "emocurate/reliability_em.hpp"

namespace emocurate {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitPolicyInfeasible = 2,
  kExitNumericalFailure = 3,
};

struct PipelineConfig {
  std::string input;
  std::string metadata;  // optional
  std::string out_dir;   // empty: print to the output stream where supported
  OutputFormat format = OutputFormat::Json;
  EMConfig em;
  RetentionPolicy retention;
  SelectionPolicy selection;
};

struct SimulateConfig {
  std::string config_file;  // optional JSON overrides
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<long long> annotators;
  std::optional<long long> clips;
};

namespace detail {

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const PolicyInfeasibleError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitPolicyInfeasible;
  } catch (const NumericalFailure& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumericalFailure;
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kExitNumericalFailure;
  }
}

inline AnnotationCorpus load_corpus(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required");
  auto records = parse_annotations(read_file(cfg.input));
  std::map<std::string, double> durations;
  if (!cfg.metadata.empty()) durations = parse_metadata(read_file(cfg.metadata));
  AnnotationCorpus corpus(std::move(records), std::move(durations));
  if (corpus.empty()) throw EmptyCorpusError();
  return corpus;
}

inline std::string out_path(const PipelineConfig& cfg, const std::string& stem, std::string_view ext) {
  return (std::filesystem::path(cfg.out_dir) / (stem + std::string(ext))).string();
}

inline void emit(const PipelineConfig& cfg, std::ostream& out, const std::string& stem,
                 std::string_view ext, const std::string& content) {
  if (cfg.out_dir.empty()) {
    out << content;
  } else {
    std::filesystem::create_directories(cfg.out_dir);
    write_file(out_path(cfg, stem, ext), content);
  }
}

inline void check_configs(const PipelineConfig& cfg) {
  cfg.em.validate();
  cfg.retention.validate();
  cfg.selection.validate();
}

}  // namespace detail

/// Full pipeline: EM reliability, retention, selection, consistency and
/// distribution tables, written to `out_dir`.
inline int cmd_aggregate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::check_configs(cfg);
    if (cfg.out_dir.empty()) throw InputError("--out-dir is required for aggregate");
    const AnnotationCorpus corpus = detail::load_corpus(cfg);
    const ReliabilityReport report = reliability_report(corpus, cfg.em);
    const RetainedCorpus retained = retain_labels(corpus, report, cfg.retention);
    const CuratedDataset dataset = curate(retained, cfg.selection);
    const ConsistencyReport consistency = consistency_report(retained);
    const std::string ext(file_extension(cfg.format));

    std::filesystem::create_directories(cfg.out_dir);
    write_file(detail::out_path(cfg, "reliability", ".json"), dump(reliability_to_json(report)));
    write_file(detail::out_path(cfg, "curated", ".json"), dump(curated_to_json(dataset)));
    write_file(detail::out_path(cfg, "decisions", ".csv"), decisions_csv(dataset));
    write_file(detail::out_path(cfg, "consistency", ext), render(consistency, cfg.format));

    bool stats_written = false;
    if (cfg.metadata.empty()) {
      fmt::print(err, "warning: no metadata file; distribution tables skipped\n");
    } else {
      try {
        const auto single = single_distribution(dataset, corpus.durations());
        const auto multiple = multiple_distribution(dataset, corpus.durations());
        write_file(detail::out_path(cfg, "distribution_single", ext), render(single, cfg.format));
        write_file(detail::out_path(cfg, "distribution_multiple", ext), render(multiple, cfg.format));
        stats_written = true;
      } catch (const MissingDurationError& e) {
        fmt::print(err, "warning: {}; distribution tables skipped\n", e.what());
      }
    }

    std::size_t multiple_clips = 0;
    for (const auto& [c, ids] : dataset.multiple_set) multiple_clips += ids.size();
    fmt::print(out, "clips: {} in, {} single, {} multiple ({} categories), {} excluded\n",
               corpus.num_clips(), corpus.num_clips() - dataset.excluded.size(), multiple_clips,
               dataset.multiple_set.size(), dataset.excluded.size());
    for (const auto& [k, r] : report.categories())
      fmt::print(out, "  {:<15} converged={} iterations={} p={:.4f}\n", name(k), r.converged ? "true" : "false",
                 r.iterations, r.state.p);
    for (const auto& [k, what] : report.failures()) fmt::print(out, "  {:<15} FAILED: {}\n", name(k), what);
    fmt::print(out, "distribution tables: {}\n", stats_written ? "written" : "skipped");
    return report.failures().empty() ? kExitOk : kExitNumericalFailure;
  });
}

inline int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    SimConfig sim;
    if (!cfg.config_file.empty()) {
      json j;
      try {
        j = json::parse(read_file(cfg.config_file));
      } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed simulation config: ") + e.what());
      }
      // Annotator count first, so per-annotator tables are sized correctly.
      if (cfg.annotators) j["annotators"] = *cfg.annotators;
      sim = sim_config_from_json(j);
    }
    if (cfg.annotators) {
      if (*cfg.annotators < 1) throw InputError("--annotators must be at least 1");
      sim.n_annotators = static_cast<std::size_t>(*cfg.annotators);
    }
    if (cfg.clips) {
      if (*cfg.clips < 1) throw InputError("--clips must be at least 1");
      sim.n_clips = static_cast<std::size_t>(*cfg.clips);
    }
    if (cfg.seed) sim.seed = *cfg.seed;

    const SimResult result = simulate(sim);
    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path dir(cfg.out_dir);
    write_file((dir / "annotations.json").string(), annotations_to_string(result.corpus.records()));
    write_file((dir / "metadata.json").string(), metadata_to_string(result.corpus.durations()));
    write_file((dir / "ground_truth.json").string(), ground_truth_to_string(result.corpus, result.truth));
    fmt::print(out, "simulated {} clips x {} annotators ({} records), seed {}\n", sim.n_clips, sim.n_annotators,
               result.corpus.records().size(), sim.seed);
    return kExitOk;
  });
}

/// Cronbach's alpha per category over the retained labels.
inline int cmd_alpha(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::check_configs(cfg);
    const AnnotationCorpus corpus = detail::load_corpus(cfg);
    const ReliabilityReport report = reliability_report(corpus, cfg.em);
    const ConsistencyReport consistency = consistency_report(retain_labels(corpus, report, cfg.retention));
    detail::emit(cfg, out, "consistency", file_extension(cfg.format), render(consistency, cfg.format));
    return kExitOk;
  });
}

/// Distribution tables of the curated single and multiple sets.
inline int cmd_stats(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::check_configs(cfg);
    if (cfg.metadata.empty()) throw InputError("--metadata is required for stats");
    const AnnotationCorpus corpus = detail::load_corpus(cfg);
    const ReliabilityReport report = reliability_report(corpus, cfg.em);
    const CuratedDataset dataset = curate(corpus, report, cfg.retention, cfg.selection);
    const auto single = single_distribution(dataset, corpus.durations());
    const auto multiple = multiple_distribution(dataset, corpus.durations());
    const auto ext = file_extension(cfg.format);
    if (cfg.out_dir.empty()) {
      out << render(single, cfg.format) << "\n" << render(multiple, cfg.format);
    } else {
      detail::emit(cfg, out, "distribution_single", ext, render(single, cfg.format));
      detail::emit(cfg, out, "distribution_multiple", ext, render(multiple, cfg.format));
    }
    return kExitOk;
  });
}

/// Annotator reliability report alone.
inline int cmd_report(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::check_configs(cfg);
    const AnnotationCorpus corpus = detail::load_corpus(cfg);
    const ReliabilityReport report = reliability_report(corpus, cfg.em);
    detail::emit(cfg, out, "reliability", file_extension(cfg.format), render(report, cfg.format));
    return report.failures().empty() ? kExitOk : kExitNumericalFailure;
  });
}

}  // namespace emocurate
