#pragma once

#include <string>
#include <vector>

#include "qtw/nc.hpp"

namespace qtw::report {

inline constexpr int kSchemaVersion = 1;

struct Conventions {
  std::string epsilon;
  std::string leibniz_twist;
  std::string trace_weights;
  std::string eq16_reading;
};

struct Check {
  std::string id;
  std::string anchor;
  std::string residual;  // "0" or a canonical rendering of what survived
  bool pass = false;     // residual == "0"
  double ms = 0;
};

struct Report {
  std::string suite;
  int schema_version = kSchemaVersion;
  Conventions conventions;
  std::vector<Check> checks;
  bool passed() const;
};

/// "0" when every entry is zero; otherwise the count of nonzero entries and
/// the first one rendered.
std::string summarize(const nc::Registry& reg, const std::vector<nc::NcPoly>& residuals);
std::string summarize(const std::vector<LaurentScalar>& residuals);

/// With timing off every ms field is written as 0, so equal inputs give
/// byte-identical output.
std::string to_json(const Report& r, bool timing);
std::string to_text(const Report& r, bool timing);

}  // namespace qtw::report
