// emocurate/io.hpp

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

// Reading and writing the annotation, metadata, simulation-config and report
// file formats. All writers emit sorted object keys and a trailing newline.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "emocurate/annotation.hpp"
#include "emocurate/annotator_sim.hpp"
#include "emocurate/consistency.hpp"
#include "emocurate/error.hpp"
#include "emocurate/label_policy.hpp"
#include "emocurate/output_format.hpp"
#include "emocurate/reliability_em.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << content;
  if (!out) throw InputError("failed writing " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Annotation records
// ---------------------------------------------------------------------------

inline AnnotationRecord record_from_json(const json& j, std::size_t index) {
  const std::string where = "record " + std::to_string(index);
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto string_field = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
      throw InputError(where + ": missing or non-string field '" + key + "'");
    return it->get<std::string>();
  };
  AnnotationRecord r;
  r.video_id = string_field("video_id");
  r.annotator_id = string_field("annotator_id");
  auto labels = j.find("labels");
  auto scores = j.find("scores");
  if (labels == j.end() || !labels->is_array()) throw InputError(where + ": 'labels' must be an array");
  if (scores == j.end() || !scores->is_array()) throw InputError(where + ": 'scores' must be an array");
  try {
    for (const auto& l : *labels) {
      if (!l.is_string()) throw InputError("label is not a string");
      r.labels.push_back(parse_category(l.get<std::string>()));
    }
    for (const auto& s : *scores) {
      if (!s.is_number()) throw InputError("score is not a number");
      r.scores.push_back(Confidence::from_score(s.get<double>()));
    }
    r.validate();
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return r;
}

inline json record_to_json(const AnnotationRecord& r) {
  json labels = json::array();
  json scores = json::array();
  for (std::size_t n = 0; n < r.labels.size(); ++n) {
    labels.push_back(std::string(name(r.labels[n])));
    scores.push_back(r.scores[n].value());
  }
  return {{"video_id", r.video_id}, {"annotator_id", r.annotator_id}, {"labels", labels}, {"scores", scores}};
}

namespace detail {
inline bool starts_with_array(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '[';
  }
  return false;
}
}  // namespace detail

/// Parses a JSON array of records or a newline-delimited stream of them.
/// Errors name the zero-based record index.
inline std::vector<AnnotationRecord> parse_annotations(const std::string& text) {
  std::vector<AnnotationRecord> out;
  if (detail::starts_with_array(text)) {
    std::size_t objects_started = 0;
    json doc;
    try {
      doc = json::parse(text, [&](int depth, json::parse_event_t event, json&) {
        if (depth == 1 && event == json::parse_event_t::object_start) ++objects_started;
        return true;
      });
    } catch (const json::parse_error& e) {
      const std::size_t index = objects_started == 0 ? 0 : objects_started - 1;
      throw InputError(fmt::format("malformed JSON in record {} (byte {}): {}", index, e.byte, e.what()));
    }
    for (std::size_t n = 0; n < doc.size(); ++n) out.push_back(record_from_json(doc[n], n));
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(fmt::format("malformed JSON in record {} (line {}): {}", out.size(), line_no, e.what()));
    }
    out.push_back(record_from_json(j, out.size()));
  }
  return out;
}

inline std::string annotations_to_string(const std::vector<AnnotationRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return dump(arr);
}

// ---------------------------------------------------------------------------
// Clip metadata
// ---------------------------------------------------------------------------

inline std::map<std::string, double> parse_metadata(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed metadata JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("metadata must be a JSON array");
  std::map<std::string, double> out;
  for (std::size_t n = 0; n < doc.size(); ++n) {
    const auto& e = doc[n];
    if (!e.is_object() || !e.contains("video_id") || !e["video_id"].is_string() ||
        !e.contains("duration_seconds") || !e["duration_seconds"].is_number())
      throw InputError(fmt::format("metadata entry {}: needs string video_id and numeric duration_seconds", n));
    const auto id = e["video_id"].get<std::string>();
    if (!out.emplace(id, e["duration_seconds"].get<double>()).second)
      throw InputError("metadata entry " + std::to_string(n) + ": duplicate video_id " + id);
  }
  return out;
}

inline std::string metadata_to_string(const std::map<std::string, double>& durations) {
  json arr = json::array();
  for (const auto& [id, s] : durations) arr.push_back({{"video_id", id}, {"duration_seconds", s}});
  return dump(arr);
}

inline std::string ground_truth_to_string(const AnnotationCorpus& corpus, const std::vector<EmotionSet>& truth) {
  json out = json::object();
  for (std::size_t j = 0; j < corpus.num_clips(); ++j) {
    json labels = json::array();
    for (Emotion e : truth[j].members()) labels.push_back(std::string(name(e)));
    out[corpus.clips()[j]] = labels;
  }
  return dump(out);
}

// ---------------------------------------------------------------------------
// Simulation config
// ---------------------------------------------------------------------------

namespace detail {
// A number applies to every category; an object maps category names to values
// and leaves the rest at `fallback`.
inline CategoryValues category_values(const json& j, double fallback, const std::string& what) {
  CategoryValues v = filled(fallback);
  if (j.is_number()) return filled(j.get<double>());
  if (!j.is_object()) throw InputError(what + ": expected a number or an object keyed by category");
  for (const auto& [key, val] : j.items()) {
    if (!val.is_number()) throw InputError(what + ": value for " + key + " is not a number");
    v[ordinal(parse_category(key))] = val.get<double>();
  }
  return v;
}

inline std::vector<CategoryValues> reliability_table(const json& j, double& scalar, std::size_t m,
                                                     const std::string& what) {
  if (j.is_number()) {
    scalar = j.get<double>();
    return {};
  }
  if (j.is_object()) return std::vector<CategoryValues>(m, category_values(j, scalar, what));
  if (!j.is_array()) throw InputError(what + ": expected a number, object or per-annotator array");
  if (j.size() != m) throw InputError(fmt::format("{}: array has {} entries for {} annotators", what, j.size(), m));
  std::vector<CategoryValues> out;
  for (const auto& row : j) out.push_back(category_values(row, scalar, what));
  return out;
}

inline ConfidenceWeights confidence_weights(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != Confidence::kLevels)
    throw InputError(what + ": expected an array of 11 weights");
  ConfidenceWeights w{};
  for (std::size_t n = 0; n < w.size(); ++n) w[n] = j[n].get<double>();
  return w;
}
}  // namespace detail

/// Applies a config-file JSON object on top of `base`.
inline SimConfig sim_config_from_json(const json& j, SimConfig base = {}) {
  if (!j.is_object()) throw InputError("simulation config must be a JSON object");
  try {
    if (j.contains("annotators")) base.n_annotators = j["annotators"].get<std::size_t>();
    if (j.contains("clips")) base.n_clips = j["clips"].get<std::size_t>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("prevalence")) base.prevalence = detail::category_values(j["prevalence"], 0.3, "prevalence");
    if (j.contains("alpha"))
      base.alpha = detail::reliability_table(j["alpha"], base.default_alpha, base.n_annotators, "alpha");
    if (j.contains("beta"))
      base.beta = detail::reliability_table(j["beta"], base.default_beta, base.n_annotators, "beta");
    if (j.contains("confidence")) {
      const auto& c = j["confidence"];
      if (c.contains("consistent")) base.consistent = detail::confidence_weights(c["consistent"], "confidence.consistent");
      if (c.contains("inconsistent"))
        base.inconsistent = detail::confidence_weights(c["inconsistent"], "confidence.inconsistent");
    }
    if (j.contains("duration")) {
      const auto& d = j["duration"];
      if (d.contains("median_seconds")) base.duration.log_median = std::log(d["median_seconds"].get<double>());
      if (d.contains("log_sigma")) base.duration.log_sigma = d["log_sigma"].get<double>();
      if (d.contains("min_seconds")) base.duration.min_seconds = d["min_seconds"].get<double>();
      if (d.contains("max_seconds")) base.duration.max_seconds = d["max_seconds"].get<double>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid simulation config: ") + e.what());
  }
  return base;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json reliability_to_json(const ReliabilityReport& report) {
  json out = json::object();
  for (const auto& [k, r] : report.categories()) {
    json alpha = json::object(), beta = json::object(), phi = json::object();
    for (std::size_t i = 0; i < report.annotators().size(); ++i) {
      alpha[report.annotators()[i]] = r.state.alpha[i];
      beta[report.annotators()[i]] = r.state.beta[i];
    }
    for (std::size_t j = 0; j < report.clips().size(); ++j) phi[report.clips()[j]] = r.state.phi[j];
    json trace = json::array();
    for (const auto& t : r.trace)
      trace.push_back({{"iteration", t.iteration}, {"q", t.q}, {"log_likelihood", t.log_likelihood}});
    out[std::string(name(k))] = {{"alpha", alpha},          {"beta", beta},
                                 {"p", r.state.p},          {"phi", phi},
                                 {"iterations", r.iterations}, {"converged", r.converged},
                                 {"trace", trace},          {"warnings", r.warnings}};
  }
  for (const auto& [k, what] : report.failures()) out[std::string(name(k))] = {{"error", what}};
  return out;
}

inline std::string reliability_csv(const ReliabilityReport& report) {
  std::string out = "category,annotator_id,alpha,beta,balanced_reliability\n";
  for (const auto& [k, r] : report.categories())
    for (std::size_t i = 0; i < report.annotators().size(); ++i)
      out += fmt::format("{},{},{:.6f},{:.6f},{:.6f}\n", name(k), csv_field(report.annotators()[i]),
                         r.state.alpha[i], r.state.beta[i], 0.5 * (r.state.alpha[i] + r.state.beta[i]));
  return out;
}

inline std::string reliability_markdown(const ReliabilityReport& report) {
  std::string out = "| Annotator |";
  std::string rule = "|---|";
  for (Emotion k : kAllEmotions) {
    out += fmt::format(" {} |", code(k));
    rule += "---|";
  }
  out += "\n" + rule + "\n";
  for (std::size_t i = 0; i < report.annotators().size(); ++i) {
    out += "| " + report.annotators()[i] + " |";
    for (Emotion k : kAllEmotions) {
      const auto b = report.balanced_reliability(i, k);
      out += b ? fmt::format(" {:.3f} |", *b) : std::string(" - |");
    }
    out += "\n";
  }
  return out;
}

inline std::string render(const ReliabilityReport& report, OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return dump(reliability_to_json(report));
    case OutputFormat::Csv: return reliability_csv(report);
    case OutputFormat::Markdown: return reliability_markdown(report);
  }
  return {};
}

inline json curated_to_json(const CuratedDataset& ds) {
  json single = json::object(), multiple = json::object(), excluded = json::array();
  for (const auto& [k, ids] : ds.single_set) single[std::string(name(k))] = ids;
  for (const auto& [c, ids] : ds.multiple_set) multiple[c.canonical_name()] = ids;
  for (const auto& e : ds.excluded) excluded.push_back({{"video_id", e.video_id}, {"reason", e.reason}});
  return {{"single_set", single},
          {"multiple_set", multiple},
          {"excluded", excluded},
          {"min_category_count", ds.min_category_count}};
}

/// One row per clip: video_id, valid labels as "Name:c_mean" joined by ";",
/// single label, compound label, disposition.
inline std::string decisions_csv(const CuratedDataset& ds) {
  std::string out = "video_id,valid_labels,single_label,compound_label,disposition\n";
  for (const auto& d : ds.decisions) {
    std::string valid;
    for (const auto& [k, c_mean] : d.valid_labels) {
      if (!valid.empty()) valid += ';';
      valid += fmt::format("{}:{:.4f}", name(k), c_mean);
    }
    out += fmt::format("{},{},{},{},{}\n", csv_field(d.video_id), csv_field(valid),
                       d.single_label ? std::string(name(*d.single_label)) : std::string(),
                       d.compound_label ? csv_field(d.compound_label->canonical_name()) : std::string(),
                       to_string(d.disposition));
  }
  return out;
}

inline json consistency_to_json(const ConsistencyReport& report) {
  json cats = json::object();
  for (const auto& [k, c] : report.categories) {
    json entry = {{"alpha", c.alpha ? json(*c.alpha) : json(nullptr)},
                  {"items_used", c.items_used},
                  {"subjects_used", c.subjects_used}};
    if (!c.alpha) entry["undefined_reason"] = c.undefined_reason;
    cats[std::string(name(k))] = entry;
  }
  const auto avg = report.average();
  return {{"categories", cats}, {"average", avg ? json(*avg) : json(nullptr)}};
}

inline std::string render(const ConsistencyReport& report, OutputFormat f) {
  auto cell = [](const std::optional<double>& a) { return a ? fmt::format("{:.3f}", *a) : std::string("undefined"); };
  switch (f) {
    case OutputFormat::Json: return dump(consistency_to_json(report));
    case OutputFormat::Csv: {
      std::string out = "Emotions,Alpha\n";
      for (const auto& [k, c] : report.categories) out += fmt::format("{},{}\n", name(k), cell(c.alpha));
      return out + fmt::format("Average,{}\n", cell(report.average()));
    }
    case OutputFormat::Markdown: {
      std::string out = "| Emotions | Alpha |\n|---|---|\n";
      for (const auto& [k, c] : report.categories) out += fmt::format("| {} | {} |\n", name(k), cell(c.alpha));
      return out + fmt::format("| Average | {} |\n", cell(report.average()));
    }
  }
  return {};
}

}  // namespace emocurate
