#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtw/report.hpp"

namespace qtw::suites {

/// Bad suite name or a parameter the suite does not accept (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> k_inst;
  std::optional<Rational> q;
};

const std::vector<std::string>& suite_names();

/// Runs every check of the suite in a fixed order.
report::Report run_suite(const std::string& name, const Params& params);

/// Report anchor for a check id; throws std::out_of_range for unknown ids.
const std::string& anchor(const std::string& check_id);

/// The pinned conventions printed in every report.
const report::Conventions& pinned_conventions();

}  // namespace qtw::suites
