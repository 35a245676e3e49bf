// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_DATA_HPP
#define MCAR_AVG_DATA_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mcar_avg/types.hpp"

namespace mcar {

// Response vector plus a covariate matrix whose unobserved cells are
// identified only by `mask`. The numeric content of x at unobserved
// positions is unspecified; loaders store NaN there.
class ObservedDataset {
 public:
  ObservedDataset(Vector y, Matrix x, Mask mask, std::vector<std::string> column_names = {});

  const Vector& y() const noexcept { return y_; }
  const Matrix& x() const noexcept { return x_; }
  const Mask& mask() const noexcept { return mask_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }

  Index rows() const noexcept { return x_.rows(); }
  Index cols() const noexcept { return x_.cols(); }
  bool observed(Index i, Index k) const { return mask_(i, k); }
  bool fully_observed() const { return mask_.all(); }

 private:
  Vector y_;
  Matrix x_;
  Mask mask_;
  std::vector<std::string> names_;
};

/// Covariates with every unobserved cell replaced by exactly 0.
class ZeroFilledMatrix {
 public:
  ZeroFilledMatrix(Matrix xt, Mask source_mask) : xt_(std::move(xt)), mask_(std::move(source_mask)) {}

  const Matrix& xt() const noexcept { return xt_; }
  const Mask& source_mask() const noexcept { return mask_; }

 private:
  Matrix xt_;
  Mask mask_;
};

struct CsvOptions {
  std::string na_token = "NA";
  std::string response_column = "y";
};

/// Comma-delimited text with a header row. Every column other than the
/// response is a covariate; a cell equal to `na_token` after whitespace
/// trimming is unobserved.
ObservedDataset load_csv(const std::string& path, const CsvOptions& opts = {});
ObservedDataset parse_csv(std::istream& in, const CsvOptions& opts = {},
                          std::string_view source = "<stream>");

/// Writes the response first, then covariates, using `na_token` for
/// unobserved cells. Values are printed with round-trip precision.
void write_csv(std::ostream& out, const ObservedDataset& d, const CsvOptions& opts = {});

ZeroFilledMatrix zero_fill(const ObservedDataset& d);

/// Number of singular values above max(rows, cols) * sigma_max * eps.
Index numerical_rank(const Matrix& a);

}  // namespace mcar

#endif  // MCAR_AVG_DATA_HPP
