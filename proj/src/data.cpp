// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#include "mcar_avg/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mcar_avg/error.hpp"

namespace mcar {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& value) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  return res.ec == std::errc() && res.ptr == end;
}

std::string where(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line << ": ";
  return os.str();
}

}  // namespace

ObservedDataset::ObservedDataset(Vector y, Matrix x, Mask mask, std::vector<std::string> column_names)
    : y_(std::move(y)), x_(std::move(x)), mask_(std::move(mask)), names_(std::move(column_names)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw Error(Errc::invalid_argument, "dataset needs n >= 1 rows and K >= 1 covariates");
  }
  if (y_.size() != x_.rows()) {
    throw Error(Errc::invalid_argument, "response length does not match covariate rows");
  }
  if (mask_.rows() != x_.rows() || mask_.cols() != x_.cols()) {
    throw Error(Errc::invalid_argument, "mask and covariate matrix differ in shape");
  }
  for (Index i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_(i))) {
      throw Error(Errc::data, "response is missing or non-finite at row " + std::to_string(i + 1));
    }
  }
  if (names_.empty()) {
    for (Index k = 0; k < x_.cols(); ++k) names_.push_back("x" + std::to_string(k + 1));
  } else if (static_cast<Index>(names_.size()) != x_.cols()) {
    throw Error(Errc::invalid_argument, "column name count does not match covariate columns");
  }
}

ObservedDataset parse_csv(std::istream& in, const CsvOptions& opts, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto field : split_commas(line)) header.emplace_back(field);
    break;
  }
  if (header.empty()) throw Error(Errc::parse, std::string(source) + ": empty file");

  std::size_t response_pos = header.size();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == opts.response_column && response_pos == header.size()) {
      response_pos = j;
    } else {
      names.push_back(header[j]);
    }
  }
  if (response_pos == header.size()) {
    throw Error(Errc::parse, where(source, line_no) + "response column '" + opts.response_column +
                                 "' not found in header");
  }
  if (names.empty()) throw Error(Errc::parse, where(source, line_no) + "no covariate columns");

  std::vector<double> ys;
  std::vector<double> xs;
  std::vector<char> observed;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::parse, where(source, line_no) + "expected " + std::to_string(header.size()) +
                                   " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto cell = fields[j];
      const bool is_na = cell == opts.na_token;
      double value = nan;
      if (!is_na && !parse_double(cell, value)) {
        throw Error(Errc::parse, where(source, line_no) + "non-numeric value '" + std::string(cell) +
                                     "' in column '" + header[j] + "'");
      }
      if (j == response_pos) {
        if (is_na) {
          throw Error(Errc::data, where(source, line_no) + "missing response value in data row " +
                                      std::to_string(ys.size() + 1));
        }
        ys.push_back(value);
      } else {
        xs.push_back(value);
        observed.push_back(is_na ? 0 : 1);
      }
    }
  }
  if (ys.empty()) throw Error(Errc::parse, std::string(source) + ": no data rows");

  const auto n = static_cast<Index>(ys.size());
  const auto k = static_cast<Index>(names.size());
  Vector y = Eigen::Map<const Vector>(ys.data(), n);
  Matrix x(n, k);
  Mask mask(n, k);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < k; ++j) {
      x(i, j) = xs[static_cast<std::size_t>(i * k + j)];
      mask(i, j) = observed[static_cast<std::size_t>(i * k + j)] != 0;
    }
  }
  return ObservedDataset(std::move(y), std::move(x), std::move(mask), std::move(names));
}

ObservedDataset load_csv(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  return parse_csv(in, opts, path);
}

void write_csv(std::ostream& out, const ObservedDataset& d, const CsvOptions& opts) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << opts.response_column;
  for (const auto& name : d.column_names()) out << ',' << name;
  out << '\n';
  for (Index i = 0; i < d.rows(); ++i) {
    out << d.y()(i);
    for (Index k = 0; k < d.cols(); ++k) {
      out << ',';
      if (d.observed(i, k)) {
        out << d.x()(i, k);
      } else {
        out << opts.na_token;
      }
    }
    out << '\n';
  }
  out.precision(old_precision);
}

Index numerical_rank(const Matrix& a) {
  if (a.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * sv(0) *
                     std::numeric_limits<double>::epsilon();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

ZeroFilledMatrix zero_fill(const ObservedDataset& d) {
  Matrix xt = d.mask().select(d.x().array(), 0.0).matrix();
  if (numerical_rank(xt) < d.cols()) {
    throw Error(Errc::rank_deficient,
                "X~ not full column rank: zero-filled covariates must have full column rank");
  }
  return ZeroFilledMatrix(std::move(xt), d.mask());
}

}  // namespace mcar
