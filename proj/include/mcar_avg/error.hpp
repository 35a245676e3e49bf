// Copyright 2026 The mcar_avg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MCAR_AVG_ERROR_HPP
#define MCAR_AVG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mcar {

/// Error categories shared by every module; mirrored one-to-one by the
/// status codes of the C interface.
enum class Errc {
  invalid_argument = 1,
  parse,
  data,
  rank_deficient,
  no_complete_cases,
  infeasible,
  numeric,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mcar

#endif  // MCAR_AVG_ERROR_HPP
