// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "mcar_avg/mcar_avg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;

struct DatasetDeleter {
  void operator()(mcar_dataset* d) const { mcar_dataset_free(d); }
};
struct FitDeleter {
  void operator()(mcar_fit* f) const { mcar_fit_free(f); }
};
struct StudyDeleter {
  void operator()(mcar_study* s) const { mcar_study_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { mcar_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

int fail(mcar_status status) {
  std::cerr << "error: " << mcar_status_string(status) << ": " << mcar_last_error() << "\n";
  return status == MCAR_E_INTERNAL ? kExitInternal : kExitUser;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitUser;
  }
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  return kExitOk;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct InputOptions {
  std::string input;
  std::string na_token = "NA";
  std::string response = "y";
  std::string out;
};

int load(const InputOptions& in, std::unique_ptr<mcar_dataset, DatasetDeleter>& d) {
  mcar_dataset* raw = nullptr;
  const auto st = mcar_dataset_load_csv(in.input.c_str(), in.na_token.c_str(), in.response.c_str(), &raw);
  if (st != MCAR_OK) return fail(st);
  d.reset(raw);
  return kExitOk;
}

int cmd_patterns(const InputOptions& in) {
  std::unique_ptr<mcar_dataset, DatasetDeleter> d;
  if (const int rc = load(in, d); rc != kExitOk) return rc;
  char* json = nullptr;
  if (const auto st = mcar_patterns_json(d.get(), &json); st != MCAR_OK) return fail(st);
  OwnedString owned(json);
  return emit(owned.get(), in.out);
}

int cmd_fit(const InputOptions& in, const std::string& family, double lambda) {
  std::unique_ptr<mcar_dataset, DatasetDeleter> d;
  if (const int rc = load(in, d); rc != kExitOk) return rc;
  mcar_fit* raw = nullptr;
  if (const auto st = mcar_fit_run(d.get(), family.c_str(), lambda, &raw); st != MCAR_OK) return fail(st);
  std::unique_ptr<mcar_fit, FitDeleter> fit(raw);
  char* json = nullptr;
  if (const auto st = mcar_fit_json(fit.get(), &json); st != MCAR_OK) return fail(st);
  OwnedString owned(json);
  return emit(owned.get(), in.out);
}

struct SimulateOptions {
  std::string family = "bernoulli";
  std::vector<std::int64_t> n = {100, 200};
  std::vector<double> a = {-0.3, 0.0, 0.5};
  int reps = 1000;
  std::uint64_t seed = 0;
  double lambda = 2.0;
  int threads = -1;
  std::string out;
  std::string format;
  bool table = false;
  bool values = false;
  bool keep_last = false;
};

int cmd_simulate(const SimulateOptions& o) {
  mcar_sim_options opts = mcar_sim_options_default();
  opts.family = o.family.c_str();
  opts.n_values = o.n.data();
  opts.n_count = o.n.size();
  opts.a_values = o.a.data();
  opts.a_count = o.a.size();
  opts.replications = o.reps;
  opts.seed = o.seed;
  opts.lambda = o.lambda;
  opts.keep_last_covariate = o.keep_last ? 1 : 0;
  opts.threads = 1;
  if (o.threads >= 0) {
    opts.threads = o.threads;
  } else if (const char* env = std::getenv("MCAR_AVG_THREADS")) {
    try {
      opts.threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "error: MCAR_AVG_THREADS must be an integer\n";
      return kExitUser;
    }
  }

  std::string format = o.format;
  if (format.empty()) format = o.table ? "table" : (ends_with(o.out, ".csv") ? "csv" : "json");

  mcar_study* raw = nullptr;
  if (const auto st = mcar_study_run(&opts, &raw); st != MCAR_OK) return fail(st);
  std::unique_ptr<mcar_study, StudyDeleter> study(raw);

  char* text = nullptr;
  mcar_status st = MCAR_OK;
  if (format == "table") {
    st = mcar_study_table(study.get(), &text);
  } else if (format == "csv") {
    st = mcar_study_csv(study.get(), &text);
  } else {
    st = mcar_study_json(study.get(), o.values ? 1 : 0, &text);
  }
  if (st != MCAR_OK) return fail(st);
  OwnedString owned(text);

  // With --table and a file output, the file keeps the machine format and
  // the table goes to stdout.
  if (o.table && !o.out.empty() && o.format.empty()) {
    std::cout << owned.get();
    char* machine = nullptr;
    st = ends_with(o.out, ".csv") ? mcar_study_csv(study.get(), &machine)
                                  : mcar_study_json(study.get(), o.values ? 1 : 0, &machine);
    if (st != MCAR_OK) return fail(st);
    OwnedString machine_owned(machine);
    return emit(machine_owned.get(), o.out);
  }
  return emit(owned.get(), o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model averaging for GLMs with covariates missing completely at random"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mcar_version()));

  InputOptions fit_in;
  std::string family = "bernoulli";
  double lambda = 2.0;
  auto* fit = app.add_subcommand("fit", "Fit the model average and CC/MIM baselines to a CSV file");
  fit->add_option("-i,--input", fit_in.input, "CSV file with a header row")->required();
  fit->add_option("--na", fit_in.na_token, "Token marking a missing covariate")->capture_default_str();
  fit->add_option("--response", fit_in.response, "Name of the response column")->capture_default_str();
  fit->add_option("-f,--family", family, "bernoulli | poisson | gaussian")->capture_default_str();
  fit->add_option("--lambda", lambda, "Penalty multiplier")->capture_default_str();
  fit->add_option("-o,--out", fit_in.out, "Output path (default stdout)");

  InputOptions pat_in;
  auto* patterns = app.add_subcommand("patterns", "Print missingness groups and candidate models");
  patterns->add_option("-i,--input", pat_in.input, "CSV file with a header row")->required();
  patterns->add_option("--na", pat_in.na_token, "Token marking a missing covariate")->capture_default_str();
  patterns->add_option("--response", pat_in.response, "Name of the response column")->capture_default_str();
  patterns->add_option("-o,--out", pat_in.out, "Output path (default stdout)");

  SimulateOptions sim;
  sim.seed = mcar_sim_options_default().seed;
  auto* simulate = app.add_subcommand("simulate", "Run the Monte Carlo comparison of MOPT, CC, MIM and MIMA");
  simulate->add_option("-f,--family", sim.family, "bernoulli | poisson | gaussian")->capture_default_str();
  simulate->add_option("--n", sim.n, "Sample size(s)")->capture_default_str();
  simulate->add_option("--a", sim.a, "Missingness threshold(s)")->capture_default_str()->allow_extra_args();
  simulate->add_option("--reps", sim.reps, "Replications per cell")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--lambda", sim.lambda, "Penalty multiplier")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores; env MCAR_AVG_THREADS)");
  simulate->add_option("-o,--out", sim.out, "Output path; .csv selects CSV");
  simulate->add_option("--format", sim.format, "json | csv | table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  simulate->add_flag("--table", sim.table, "Print the summary table");
  simulate->add_flag("--values", sim.values, "Include per-replication values in JSON");
  simulate->add_flag("--keep-last", sim.keep_last, "Let estimators see the last covariate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUser;
  }

  if (*fit) return cmd_fit(fit_in, family, lambda);
  if (*patterns) return cmd_patterns(pat_in);
  if (*simulate) return cmd_simulate(sim);
  return kExitUser;
}
