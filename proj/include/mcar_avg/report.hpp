// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_REPORT_HPP
#define MCAR_AVG_REPORT_HPP

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "mcar_avg/baselines.hpp"
#include "mcar_avg/evalsim.hpp"
#include "mcar_avg/pipeline.hpp"

namespace mcar {

/// {groups: [{columns, missing_rows}], candidates: [{id, kind, rows_count, columns}]}
/// Indices are 1-based.
nlohmann::json patterns_json(const ObservedDataset& d);

struct FitReport {
  ModelAverage average;
  std::optional<FittedCandidate> cc;
  std::optional<MleFit> mim;
  std::string cc_error;
  std::string mim_error;
};

/// The model average plus CC and MIM baselines; a baseline that cannot be
/// fitted is reported with its error instead of failing the run.
FitReport run_fit(const GlmFamily& f, const ObservedDataset& d, double lambda_n = kDefaultLambda);

/// {weights, beta, criterion, candidates: [{id, kind, k_s, n_s, converged}], ...}
nlohmann::json fit_json(const GlmFamily& f, const ObservedDataset& d, const FitReport& report);

/// {config, methods: {MOPT: {mean, median, sd, values?}, ...}, failures}
nlohmann::json study_json(const SimResult& result, bool include_values);
/// One study as the object above; several as {"cells": [...]}.
nlohmann::json studies_json(std::span<const SimResult> results, bool include_values);

/// a,n,replication,MOPT,CC,MIM,MIMA with KL/n per replication.
std::string studies_csv(std::span<const SimResult> results);

/// Aligned text in the layout of the simulation table; every value is
/// KL/n multiplied by 10.
std::string studies_table(std::span<const SimResult> results);

}  // namespace mcar

#endif  // MCAR_AVG_REPORT_HPP
