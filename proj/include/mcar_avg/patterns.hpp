// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_PATTERNS_HPP
#define MCAR_AVG_PATTERNS_HPP

#include <string_view>
#include <vector>

#include "mcar_avg/data.hpp"

namespace mcar {

/// Columns that share exactly the same set of unobserved rows.
struct ColumnGroup {
  IndexSet columns;
  IndexSet missing_rows;
};

enum class CandidateKind { complete_case, sufficient_sample };

std::string_view to_string(CandidateKind kind);

/// One candidate model: the rows it is fitted on and the covariate
/// columns it uses. `id` is 1-based, the complete-case model is id 1.
struct CandidateModel {
  int id = 0;
  CandidateKind kind = CandidateKind::complete_case;
  IndexSet rows;
  IndexSet columns;

  Index n() const noexcept { return static_cast<Index>(rows.size()); }
  Index k() const noexcept { return static_cast<Index>(columns.size()); }
};

// Embeds a k_s-vector into R^K at the positions of `columns` and back.
class Projection {
 public:
  Projection(IndexSet columns, Index total_columns);

  Vector expand(const Vector& sub) const;
  Vector compress(const Vector& full) const;

  const IndexSet& columns() const noexcept { return columns_; }
  Index total_columns() const noexcept { return total_; }

 private:
  IndexSet columns_;
  Index total_;
};

/// Partition of the columns by identical missing-row sets, ordered by the
/// smallest member column.
std::vector<ColumnGroup> detect_column_groups(const ObservedDataset& d);

/// Rows observed in every column.
IndexSet complete_rows(const ObservedDataset& d);

/// The complete-case candidate (id 1) alone, with the same feasibility and
/// rank checks build_candidates applies.
CandidateModel complete_case_candidate(const ObservedDataset& d);

/// Candidate 1 is the complete-case model; candidates 2..S are one
/// sufficient-sample model per column group, in group order. Throws when
/// there are no complete cases, a candidate has n_s < k_s + 1, or a
/// candidate design is rank deficient.
std::vector<CandidateModel> build_candidates(const ObservedDataset& d);

/// Rows x columns submatrix.
Matrix submatrix(const Matrix& x, const IndexSet& rows, const IndexSet& columns);
Vector subvector(const Vector& v, const IndexSet& rows);

}  // namespace mcar

#endif  // MCAR_AVG_PATTERNS_HPP
