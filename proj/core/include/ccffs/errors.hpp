#pragma once

#include <stdexcept>
#include <string>

namespace ccffs {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Shape or size violation: z > N, t > n, mismatched row counts.
class dimension_error : public error {
  using error::error;
};

// Numerically unusable input: zero variance, rank-deficient block,
// single-class labels, all-constant features.
class degenerate_input_error : public error {
  using error::error;
};

// coordinates() called on columns outside the range of the basis.
class not_in_range_error : public error {
  using error::error;
};

// Greedy selection cannot continue: every remaining candidate is degenerate.
class no_informative_candidate_error : public error {
  using error::error;
};

// Engines disagreed on the selected sequence during a benchmark run.
class consistency_error : public error {
 public:
  consistency_error(const std::string& what, int divergent_iteration)
      : error(what), divergent_iteration(divergent_iteration) {}
  int divergent_iteration = -1;
};

// Filesystem failure.
class io_error : public error {
  using error::error;
};

// Round-off beyond tolerated bounds; indicates a bug, not bad input.
class internal_error : public error {
  using error::error;
};

}  // namespace ccffs
