// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/patterns.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "mcar_avg/error.hpp"

namespace mcar {

std::string_view to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::complete_case:
      return "CC";
    case CandidateKind::sufficient_sample:
      return "SSI";
  }
  return "?";
}

Projection::Projection(IndexSet columns, Index total_columns)
    : columns_(std::move(columns)), total_(total_columns) {
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (columns_[j] < 0 || columns_[j] >= total_ || (j > 0 && columns_[j] <= columns_[j - 1])) {
      throw Error(Errc::invalid_argument, "projection columns must be increasing and within 0..K-1");
    }
  }
}

Vector Projection::expand(const Vector& sub) const {
  if (sub.size() != static_cast<Index>(columns_.size())) {
    throw Error(Errc::invalid_argument, "expand: got " + std::to_string(sub.size()) +
                                            " coefficients for " + std::to_string(columns_.size()) +
                                            " columns");
  }
  Vector full = Vector::Zero(total_);
  for (std::size_t j = 0; j < columns_.size(); ++j) full(columns_[j]) = sub(static_cast<Index>(j));
  return full;
}

Vector Projection::compress(const Vector& full) const {
  if (full.size() != total_) throw Error(Errc::invalid_argument, "compress: length is not K");
  Vector sub(static_cast<Index>(columns_.size()));
  for (std::size_t j = 0; j < columns_.size(); ++j) sub(static_cast<Index>(j)) = full(columns_[j]);
  return sub;
}

std::vector<ColumnGroup> detect_column_groups(const ObservedDataset& d) {
  std::vector<ColumnGroup> groups;
  std::map<IndexSet, std::size_t> by_pattern;
  for (Index k = 0; k < d.cols(); ++k) {
    IndexSet missing;
    for (Index i = 0; i < d.rows(); ++i) {
      if (!d.observed(i, k)) missing.push_back(i);
    }
    const auto [it, inserted] = by_pattern.try_emplace(missing, groups.size());
    if (inserted) {
      groups.push_back(ColumnGroup{{k}, std::move(missing)});
    } else {
      groups[it->second].columns.push_back(k);
    }
  }
  return groups;
}

IndexSet complete_rows(const ObservedDataset& d) {
  IndexSet rows;
  for (Index i = 0; i < d.rows(); ++i) {
    if (d.mask().row(i).all()) rows.push_back(i);
  }
  return rows;
}

Matrix submatrix(const Matrix& x, const IndexSet& rows, const IndexSet& columns) {
  return x(rows, columns);
}

Vector subvector(const Vector& v, const IndexSet& rows) { return v(rows); }

namespace {

void check_candidate(const CandidateModel& c, const ObservedDataset& d) {
  const std::string label = "candidate " + std::to_string(c.id) + " (" + std::string(to_string(c.kind)) + ")";
  if (c.n() < c.k() + 1) {
    throw Error(Errc::infeasible, label + " has n_s = " + std::to_string(c.n()) + " rows for k_s = " +
                                      std::to_string(c.k()) + " columns; needs n_s >= k_s + 1");
  }
  if (numerical_rank(submatrix(d.x(), c.rows, c.columns)) < c.k()) {
    throw Error(Errc::rank_deficient, label + " design is not of full column rank");
  }
}

}  // namespace

CandidateModel complete_case_candidate(const ObservedDataset& d) {
  CandidateModel cc;
  cc.id = 1;
  cc.kind = CandidateKind::complete_case;
  cc.rows = complete_rows(d);
  if (cc.rows.empty()) throw Error(Errc::no_complete_cases, "no complete cases");
  cc.columns.resize(static_cast<std::size_t>(d.cols()));
  for (Index k = 0; k < d.cols(); ++k) cc.columns[static_cast<std::size_t>(k)] = k;
  check_candidate(cc, d);
  return cc;
}

std::vector<CandidateModel> build_candidates(const ObservedDataset& d) {
  const auto groups = detect_column_groups(d);

  std::vector<CandidateModel> out;
  out.push_back(complete_case_candidate(d));

  for (const auto& g : groups) {
    CandidateModel m;
    m.id = static_cast<int>(out.size()) + 1;
    m.kind = CandidateKind::sufficient_sample;
    m.columns = g.columns;
    std::size_t next_missing = 0;
    for (Index i = 0; i < d.rows(); ++i) {
      if (next_missing < g.missing_rows.size() && g.missing_rows[next_missing] == i) {
        ++next_missing;
        continue;
      }
      m.rows.push_back(i);
    }
    out.push_back(std::move(m));
  }

  for (std::size_t s = 1; s < out.size(); ++s) check_candidate(out[s], d);
  return out;
}

}  // namespace mcar
