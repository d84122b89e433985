#pragma once

#include <string>
#include <vector>

#include "mpp/pomdp.hpp"

namespace mpp {

/// List of invariant violations; empty means the instance is valid.
struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string joined() const;
};

ValidationReport validate(const PrincipalPomdp& pomdp);
ValidationReport validate(const ProblemSet& problems);

/// True if every entry is >= 0 and the row sums to 1 within kProbTolerance.
bool is_distribution(std::span<const double> row, double tolerance = kProbTolerance);

}  // namespace mpp
