// tools/emocurate.cpp

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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "emocurate/emocurate.hpp"

namespace {

using namespace emocurate;

void add_io_flags(CLI::App* cmd, PipelineConfig& cfg, std::string& format) {
  cmd->add_option("--input", cfg.input, "Annotation file (JSON array or NDJSON)")->required();
  cmd->add_option("--metadata", cfg.metadata, "Clip metadata file with durations");
  cmd->add_option("--out-dir", cfg.out_dir, "Output directory");
  cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
}

void add_em_flags(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--epsilon", cfg.em.epsilon, "Relative convergence threshold on Q")->capture_default_str();
  cmd->add_option("--max-iters", cfg.em.max_iterations, "Maximum EM iterations")->capture_default_str();
}

void add_retention_flags(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--min-retained", cfg.retention.min_retained_per_clip, "Minimum annotators kept per clip")
      ->capture_default_str();
  cmd->add_option("--reliability-threshold", cfg.retention.reliability_threshold,
                  "Balanced reliability needed to keep an annotator's label")
      ->capture_default_str();
}

void add_selection_flags(CLI::App* cmd, PipelineConfig& cfg) {
  cmd->add_option("--min-category-count", cfg.selection.min_category_count,
                  "Compound categories need more clips than this")
      ->capture_default_str();
  cmd->add_option("--confidence-threshold", cfg.selection.confidence_threshold,
                  "Mean confidence needed for a valid label")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregate multi-annotator emotion annotations into curated datasets"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string format = "json";

  auto* aggregate = app.add_subcommand("aggregate", "Run the full curation pipeline");
  add_io_flags(aggregate, cfg, format);
  add_em_flags(aggregate, cfg);
  add_retention_flags(aggregate, cfg);
  add_selection_flags(aggregate, cfg);

  auto* alpha = app.add_subcommand("alpha", "Cronbach's alpha per category over retained labels");
  add_io_flags(alpha, cfg, format);
  add_em_flags(alpha, cfg);
  add_retention_flags(alpha, cfg);

  auto* stats = app.add_subcommand("stats", "Clip-length distribution of the curated sets");
  add_io_flags(stats, cfg, format);
  add_em_flags(stats, cfg);
  add_retention_flags(stats, cfg);
  add_selection_flags(stats, cfg);

  auto* report = app.add_subcommand("report", "Annotator reliability report");
  add_io_flags(report, cfg, format);
  add_em_flags(report, cfg);

  SimulateConfig sim;
  long long annotators = 0;
  long long clips = 0;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic annotation corpus");
  auto* seed_opt = simulate->add_option("--seed", seed, "Random seed");
  auto* ann_opt = simulate->add_option("--annotators", annotators, "Number of annotators");
  auto* clip_opt = simulate->add_option("--clips", clips, "Number of clips");
  simulate->add_option("--config", sim.config_file, "JSON file with prevalence and reliabilities");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  try {
    cfg.format = parse_output_format(format);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (*simulate) {
    if (*seed_opt) sim.seed = seed;
    if (*ann_opt) sim.annotators = annotators;
    if (*clip_opt) sim.clips = clips;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  if (*aggregate) return cmd_aggregate(cfg, std::cout, std::cerr);
  if (*alpha) return cmd_alpha(cfg, std::cout, std::cerr);
  if (*stats) return cmd_stats(cfg, std::cout, std::cerr);
  if (*report) return cmd_report(cfg, std::cout, std::cerr);
  return kExitInputError;
}
