// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mcar_avg/error.hpp"

namespace mcar {

namespace {

using nlohmann::json;

json one_based(const IndexSet& s) {
  json out = json::array();
  for (const Index v : s) out.push_back(v + 1);
  return out;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string_view family_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::bernoulli_logit:
      return "bernoulli-logit";
    case FamilyKind::poisson_log:
      return "poisson-log";
    case FamilyKind::gaussian_identity:
      return "gaussian-identity";
  }
  return "?";
}

}  // namespace

json patterns_json(const ObservedDataset& d) {
  json groups = json::array();
  for (const auto& g : detect_column_groups(d)) {
    groups.push_back({{"columns", one_based(g.columns)}, {"missing_rows", one_based(g.missing_rows)}});
  }
  json candidates = json::array();
  for (const auto& c : build_candidates(d)) {
    candidates.push_back({{"id", c.id},
                          {"kind", std::string(to_string(c.kind))},
                          {"rows_count", c.n()},
                          {"columns", one_based(c.columns)}});
  }
  return {{"groups", std::move(groups)}, {"candidates", std::move(candidates)}};
}

FitReport run_fit(const GlmFamily& f, const ObservedDataset& d, double lambda_n) {
  FitReport r{fit_model_average(f, d, lambda_n), std::nullopt, std::nullopt, {}, {}};
  try {
    r.cc = fit_cc(f, d);
  } catch (const Error& e) {
    r.cc_error = e.what();
  }
  try {
    r.mim = fit_mim(f, d);
  } catch (const Error& e) {
    r.mim_error = e.what();
  }
  return r;
}

json fit_json(const GlmFamily& f, const ObservedDataset& d, const FitReport& report) {
  const AveragedEstimate& est = report.average.estimate;
  json candidates = json::array();
  for (const auto& fit : report.average.fits) {
    candidates.push_back({{"id", fit.candidate.id},
                          {"kind", std::string(to_string(fit.candidate.kind))},
                          {"k_s", fit.candidate.k()},
                          {"n_s", fit.candidate.n()},
                          {"columns", one_based(fit.candidate.columns)},
                          {"converged", fit.converged},
                          {"beta", to_json(fit.beta_full)}});
  }
  json names = json::array();
  for (const auto& name : d.column_names()) names.push_back(name);

  json baselines = json::object();
  if (report.cc) {
    baselines["CC"] = {{"beta", to_json(report.cc->beta_full)}, {"converged", report.cc->converged}};
  } else {
    baselines["CC"] = {{"error", report.cc_error}};
  }
  if (report.mim) {
    baselines["MIM"] = {{"beta", to_json(report.mim->beta)}, {"converged", report.mim->converged}};
  } else {
    baselines["MIM"] = {{"error", report.mim_error}};
  }

  return {{"family", std::string(f.name())},
          {"lambda", est.lambda_n},
          {"columns", std::move(names)},
          {"weights", to_json(est.weights.values())},
          {"beta", to_json(est.beta)},
          {"criterion", est.criterion_value},
          {"optimizer", {{"iterations", est.iterations},
                         {"projected_gradient_norm", est.projected_gradient_norm},
                         {"warning", est.warning}}},
          {"candidates", std::move(candidates)},
          {"baselines", std::move(baselines)}};
}

json study_json(const SimResult& result, bool include_values) {
  const SimConfig& cfg = result.config;
  json config = {{"family", std::string(family_name(cfg.family))},
                 {"n", cfg.n},
                 {"a", cfg.a},
                 {"replications", cfg.replications},
                 {"seed", cfg.seed},
                 {"beta_true", to_json(cfg.beta_true)},
                 {"rho", cfg.rho},
                 {"drop_last_covariate", cfg.drop_last_covariate},
                 {"missing_columns", one_based(cfg.missing_columns)},
                 {"lambda", cfg.lambda_n},
                 {"loss_design", std::string(to_string(cfg.loss_design))}};
  json methods = json::object();
  json failures = json::object();
  for (const Method m : kAllMethods) {
    const auto& s = result.summary_of(m);
    json entry = {{"mean", number_or_null(s.mean)},
                  {"median", number_or_null(s.median)},
                  {"sd", number_or_null(s.sd)},
                  {"count", s.count}};
    if (include_values) {
      json values = json::array();
      for (const double v : result.values_of(m)) values.push_back(number_or_null(v));
      entry["values"] = std::move(values);
    }
    methods[std::string(to_string(m))] = std::move(entry);
    failures[std::string(to_string(m))] = s.failures;
  }
  return {{"config", std::move(config)}, {"methods", std::move(methods)}, {"failures", std::move(failures)}};
}

json studies_json(std::span<const SimResult> results, bool include_values) {
  if (results.size() == 1) return study_json(results.front(), include_values);
  json cells = json::array();
  for (const auto& r : results) cells.push_back(study_json(r, include_values));
  return {{"cells", std::move(cells)}};
}

std::string studies_csv(std::span<const SimResult> results) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "a,n,replication";
  for (const Method m : kAllMethods) os << ',' << to_string(m);
  os << '\n';
  for (const auto& r : results) {
    for (int rep = 0; rep < r.config.replications; ++rep) {
      os << r.config.a << ',' << r.config.n << ',' << rep;
      for (const Method m : kAllMethods) {
        const double v = r.values_of(m)[static_cast<std::size_t>(rep)];
        os << ',';
        if (std::isfinite(v)) {
          os << v;
        } else {
          os << "NA";
        }
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string studies_table(std::span<const SimResult> results) {
  std::ostringstream os;
  os << "KL loss / n (x10^-1)\n";
  os << std::left << std::setw(8) << "a" << std::setw(6) << "n" << std::setw(8) << "";
  for (const Method m : kAllMethods) os << std::right << std::setw(14) << to_string(m);
  os << '\n';
  auto fmt = [](double v) {
    std::ostringstream s;
    if (std::isfinite(v)) {
      s << std::fixed << std::setprecision(3) << v * 10.0;
    } else {
      s << "NA";
    }
    return s.str();
  };
  for (const auto& r : results) {
    const std::pair<const char*, double MethodSummary::*> rows[] = {
        {"mean", &MethodSummary::mean}, {"median", &MethodSummary::median}, {"SD", &MethodSummary::sd}};
    bool first = true;
    for (const auto& [label, field] : rows) {
      std::ostringstream a_label;
      a_label << r.config.a;
      os << std::left << std::setw(8) << (first ? a_label.str() : "") << std::setw(6)
         << (first ? std::to_string(r.config.n) : "") << std::setw(8) << label;
      for (const Method m : kAllMethods) os << std::right << std::setw(14) << fmt(r.summary_of(m).*field);
      os << '\n';
      first = false;
    }
    os << std::left << std::setw(14) << "" << std::setw(8) << "fail";
    for (const Method m : kAllMethods) os << std::right << std::setw(14) << r.summary_of(m).failures;
    os << '\n';
  }
  return os.str();
}

}  // namespace mcar
