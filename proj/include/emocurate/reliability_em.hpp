// emocurate/reliability_em.hpp

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

// Per-category EM estimation of annotator reliabilities. For category k each
// annotator i has a sensitivity alpha_i = P(h_ij = 1 | v_j = 1) and a
// specificity beta_i = P(h_ij = 0 | v_j = 0); the category has prevalence p.
// The E-step computes the posterior phi_j = P(v_j = 1 | H), the M-step
// re-estimates (p, alpha, beta) from phi, and the loop stops once the expected
// complete-data log-likelihood Q changes by a relative amount below epsilon.
//
// Cells missing from the coverage mask are marginalized out: they contribute
// neither to likelihood products nor to M-step sums.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "emocurate/annotation.hpp"
#include "emocurate/error.hpp"
#include "emocurate/taxonomy.hpp"

namespace emocurate {

struct EMConfig {
  double epsilon = 0.000001;
  std::size_t max_iterations = 500;
  double alpha_init = 0.999999;
  double beta_init = 0.999999;
  double clamp = kDefaultClamp;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
    if (max_iterations == 0) throw InputError("max_iterations must be positive");
    if (!(clamp > 0.0 && clamp < alpha_init && clamp < beta_init))
      throw InputError("clamp must be positive and below alpha_init and beta_init");
    if (!(alpha_init < 1.0 && beta_init < 1.0))
      throw InputError("alpha_init and beta_init must be below 1");
  }
};

struct EStepResult {
  std::vector<double> phi;
  std::vector<double> phi_complement;  // 1 - phi, evaluated without cancellation
  std::vector<double> log_mu;   // ln of the positive-class likelihood product per clip
  std::vector<double> log_eta;  // ln of the negative-class likelihood product per clip
};

struct MStepResult {
  double p = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
};

struct EMState {
  std::vector<double> alpha;
  std::vector<double> beta;
  double p = 0.0;
  std::vector<double> phi;
  std::vector<double> log_mu;
  std::vector<double> log_eta;
  double q = 0.0;
  double log_likelihood = 0.0;
  std::size_t iteration = 0;
};

struct TraceEntry {
  std::size_t iteration = 0;
  double q = 0.0;
  double log_likelihood = 0.0;
};

struct EMResult {
  EMState state;
  std::vector<TraceEntry> trace;
  bool converged = false;
  std::size_t iterations = 0;
  Warnings warnings;
};

/// Called with the state after each full iteration.
using EMObserver = std::function<void(const EMState&)>;

/// Per-clip ln(mu_j) and ln(eta_j) for the given reliabilities.
inline void clip_log_likelihoods(const CategoryMatrix& matrix, std::span<const double> alpha,
                                 std::span<const double> beta, std::vector<double>& log_mu,
                                 std::vector<double>& log_eta) {
  const std::size_t m = matrix.num_annotators();
  const std::size_t n = matrix.num_clips();
  if (alpha.size() != m || beta.size() != m)
    throw InputError("reliability vectors do not match the annotator count");
  std::vector<double> ln_a(m), ln_1a(m), ln_b(m), ln_1b(m);
  for (std::size_t i = 0; i < m; ++i) {
    ln_a[i] = std::log(alpha[i]);
    ln_1a[i] = std::log1p(-alpha[i]);
    ln_b[i] = std::log(beta[i]);
    ln_1b[i] = std::log1p(-beta[i]);
  }
  log_mu.assign(n, 0.0);
  log_eta.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double lm = 0.0;
    double le = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!matrix.present(i, j)) continue;
      if (matrix.h(i, j) == 1) {
        lm += ln_a[i];
        le += ln_1b[i];
      } else {
        lm += ln_1a[i];
        le += ln_b[i];
      }
    }
    log_mu[j] = lm;
    log_eta[j] = le;
  }
}

namespace detail {
// ln(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}
}  // namespace detail

inline EStepResult e_step(const CategoryMatrix& matrix, std::span<const double> alpha,
                          std::span<const double> beta, double p) {
  EStepResult out;
  clip_log_likelihoods(matrix, alpha, beta, out.log_mu, out.log_eta);
  const double ln_p = std::log(p);
  const double ln_q = std::log1p(-p);
  out.phi.resize(matrix.num_clips());
  out.phi_complement.resize(matrix.num_clips());
  for (std::size_t j = 0; j < matrix.num_clips(); ++j) {
    const double a = ln_p + out.log_mu[j];
    const double b = ln_q + out.log_eta[j];
    if (!std::isfinite(a) || !std::isfinite(b))
      throw NumericalFailure("non-finite likelihood in E-step for clip " + std::to_string(j) +
                             " (" + std::string(name(matrix.category())) + ")");
    // phi = 1 / (1 + e^(b - a)), evaluated on the side that cannot overflow.
    const double d = b - a;
    out.phi[j] = d > 0.0 ? std::exp(-d) / (1.0 + std::exp(-d)) : 1.0 / (1.0 + std::exp(d));
    out.phi_complement[j] = d > 0.0 ? 1.0 / (1.0 + std::exp(-d)) : std::exp(d) / (1.0 + std::exp(d));
  }
  return out;
}

/// Zero denominators keep the previous value of the affected parameter.
/// `phi_complement` carries 1 - phi; passing the E-step's own value keeps beta
/// accurate when phi is close to 1.
inline MStepResult m_step(const CategoryMatrix& matrix, std::span<const double> phi,
                          std::span<const double> phi_complement, std::span<const double> prev_alpha,
                          std::span<const double> prev_beta, double clamp, Warnings* warnings) {
  const std::size_t m = matrix.num_annotators();
  const std::size_t n = matrix.num_clips();
  if (phi.size() != n || phi_complement.size() != n)
    throw InputError("posterior vector does not match the clip count");
  if (n == 0) throw EmptyCorpusError();
  MStepResult out;
  double sum_phi = 0.0;
  for (double f : phi) sum_phi += f;
  out.p = clamp_probability(sum_phi / static_cast<double>(n), clamp);

  out.alpha.resize(m);
  out.beta.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double pos_num = 0.0, pos_den = 0.0, neg_num = 0.0, neg_den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!matrix.present(i, j)) continue;
      const double f = phi[j];
      const double g = phi_complement[j];
      const int h = matrix.h(i, j);
      pos_den += f;
      neg_den += g;
      if (h == 1) pos_num += f;
      else neg_num += g;
    }
    if (pos_den == 0.0) {
      out.alpha[i] = prev_alpha[i];
      warn(warnings, "annotator " + std::to_string(i) + ": no positive mass for " +
                         std::string(name(matrix.category())) + ", alpha kept");
    } else {
      out.alpha[i] = clamp_probability(pos_num / pos_den, clamp);
    }
    if (neg_den == 0.0) {
      out.beta[i] = prev_beta[i];
      warn(warnings, "annotator " + std::to_string(i) + ": no negative mass for " +
                         std::string(name(matrix.category())) + ", beta kept");
    } else {
      out.beta[i] = clamp_probability(neg_num / neg_den, clamp);
    }
  }
  return out;
}

inline MStepResult m_step(const CategoryMatrix& matrix, std::span<const double> phi,
                          std::span<const double> prev_alpha, std::span<const double> prev_beta,
                          double clamp = kDefaultClamp, Warnings* warnings = nullptr) {
  std::vector<double> complement(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) complement[j] = 1.0 - phi[j];
  return m_step(matrix, phi, complement, prev_alpha, prev_beta, clamp, warnings);
}

/// Expected complete-data log-likelihood; terms with zero weight are skipped
/// (0 * ln 0 = 0).
inline double q_objective(std::span<const double> phi, std::span<const double> log_mu,
                          std::span<const double> log_eta, double p) {
  const double ln_p = std::log(p);
  const double ln_q = std::log1p(-p);
  double q = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (phi[j] != 0.0) q += phi[j] * (ln_p + log_mu[j]);
    if (phi[j] != 1.0) q += (1.0 - phi[j]) * (ln_q + log_eta[j]);
  }
  return q;
}

/// Sum over clips of ln(p mu_j + (1 - p) eta_j).
inline double observed_log_likelihood(std::span<const double> log_mu,
                                      std::span<const double> log_eta, double p) {
  const double ln_p = std::log(p);
  const double ln_q = std::log1p(-p);
  double total = 0.0;
  for (std::size_t j = 0; j < log_mu.size(); ++j)
    total += detail::log_add(ln_p + log_mu[j], ln_q + log_eta[j]);
  return total;
}

/// Relative-change test on Q; falls back to an absolute test when q_prev is 0.
inline bool has_converged(double q_prev, double q_curr, double epsilon) {
  if (q_prev == 0.0) return std::abs(q_curr) < epsilon;
  return std::abs(q_curr - q_prev) / std::abs(q_prev) < epsilon;
}

inline EMResult run_em(const CategoryMatrix& matrix, const EMConfig& config = {},
                       const EMObserver& observer = {}) {
  config.validate();
  const std::size_t m = matrix.num_annotators();
  const std::size_t n = matrix.num_clips();
  if (n == 0) throw EmptyCorpusError();

  EMResult result;
  Warnings raw;
  const std::vector<int> v = majority_vote_init(matrix, &raw);
  double p = prior_init(v, config.clamp);
  std::vector<double> alpha(m, config.alpha_init);
  std::vector<double> beta(m, config.beta_init);

  std::optional<double> q_prev;
  for (std::size_t t = 1; t <= config.max_iterations; ++t) {
    EStepResult e = e_step(matrix, alpha, beta, p);
    MStepResult ms = m_step(matrix, e.phi, e.phi_complement, alpha, beta, config.clamp, &raw);

    EMState& s = result.state;
    clip_log_likelihoods(matrix, ms.alpha, ms.beta, s.log_mu, s.log_eta);
    s.q = q_objective(e.phi, s.log_mu, s.log_eta, ms.p);
    s.log_likelihood = observed_log_likelihood(s.log_mu, s.log_eta, ms.p);
    if (!std::isfinite(s.q) || !std::isfinite(s.log_likelihood))
      throw NumericalFailure("non-finite objective at iteration " + std::to_string(t) + " (" +
                             std::string(name(matrix.category())) + ")");
    s.alpha = ms.alpha;
    s.beta = ms.beta;
    s.p = ms.p;
    s.phi = std::move(e.phi);
    s.iteration = t;
    result.trace.push_back({t, s.q, s.log_likelihood});
    result.iterations = t;
    if (observer) observer(s);

    alpha = std::move(ms.alpha);
    beta = std::move(ms.beta);
    p = ms.p;
    if (q_prev && has_converged(*q_prev, s.q, config.epsilon)) {
      result.converged = true;
      break;
    }
    q_prev = s.q;
  }

  std::set<std::string> seen;
  for (auto& w : raw)
    if (seen.insert(w).second) result.warnings.push_back(std::move(w));
  return result;
}

/// Per-category EM outcome over a whole corpus.
class ReliabilityReport {
 public:
  ReliabilityReport() = default;
  ReliabilityReport(std::vector<std::string> annotators, std::vector<std::string> clips)
      : annotators_(std::move(annotators)), clips_(std::move(clips)) {}

  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::vector<std::string>& clips() const { return clips_; }
  const std::map<Emotion, EMResult>& categories() const { return results_; }
  const std::map<Emotion, std::string>& failures() const { return failures_; }

  void set_result(Emotion k, EMResult r) { results_[k] = std::move(r); }
  void set_failure(Emotion k, std::string what) { failures_[k] = std::move(what); }

  const EMResult* result(Emotion k) const {
    auto it = results_.find(k);
    return it == results_.end() ? nullptr : &it->second;
  }

  /// (alpha + beta) / 2 for annotator i on category k; empty when the
  /// category failed.
  std::optional<double> balanced_reliability(std::size_t i, Emotion k) const {
    const EMResult* r = result(k);
    if (!r) return std::nullopt;
    return 0.5 * (r->state.alpha.at(i) + r->state.beta.at(i));
  }

  /// Mean balanced reliability over the categories that completed.
  double mean_balanced_reliability(std::size_t i) const {
    double sum = 0.0;
    std::size_t count = 0;
    for (Emotion k : kAllEmotions) {
      if (auto b = balanced_reliability(i, k)) {
        sum += *b;
        ++count;
      }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
  }

  std::map<std::pair<std::string, Emotion>, double> annotator_balanced_reliability() const {
    std::map<std::pair<std::string, Emotion>, double> out;
    for (const auto& [k, r] : results_)
      for (std::size_t i = 0; i < annotators_.size(); ++i)
        out[{annotators_[i], k}] = 0.5 * (r.state.alpha[i] + r.state.beta[i]);
    return out;
  }

 private:
  std::vector<std::string> annotators_;
  std::vector<std::string> clips_;
  std::map<Emotion, EMResult> results_;
  std::map<Emotion, std::string> failures_;
};

/// Runs EM independently for each of the 11 categories. A numerical failure in
/// one category is recorded and the remaining categories still run.
inline ReliabilityReport reliability_report(const AnnotationCorpus& corpus, const EMConfig& config = {}) {
  config.validate();
  if (corpus.empty()) throw EmptyCorpusError();
  ReliabilityReport report(corpus.annotators(), corpus.clips());
  for (Emotion k : kAllEmotions) {
    try {
      report.set_result(k, run_em(binarize(corpus, k), config));
    } catch (const NumericalFailure& e) {
      report.set_failure(k, e.what());
    }
  }
  return report;
}

}  // namespace emocurate
