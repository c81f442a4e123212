#include "qtw/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace qtw::report {

namespace {

constexpr std::size_t kMaxRendering = 600;

std::string clip(std::string s) {
  if (s.size() > kMaxRendering) s = s.substr(0, kMaxRendering) + " ...";
  return s;
}

std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", ms);
  return buf;
}

}  // namespace

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string summarize(const nc::Registry& reg, const std::vector<nc::NcPoly>& residuals) {
  std::size_t nonzero = 0, first = 0;
  for (std::size_t i = residuals.size(); i-- > 0;)
    if (!residuals[i].is_zero()) {
      ++nonzero;
      first = i;
    }
  if (nonzero == 0) return "0";
  return std::to_string(nonzero) + " of " + std::to_string(residuals.size()) + " nonzero; entry " +
         std::to_string(first) + ": " + clip(nc::render(reg, residuals[first]));
}

std::string summarize(const std::vector<LaurentScalar>& residuals) {
  std::size_t nonzero = 0, first = 0;
  for (std::size_t i = residuals.size(); i-- > 0;)
    if (!residuals[i].is_zero()) {
      ++nonzero;
      first = i;
    }
  if (nonzero == 0) return "0";
  return std::to_string(nonzero) + " of " + std::to_string(residuals.size()) + " nonzero; entry " +
         std::to_string(first) + ": " + clip(residuals[first].str());
}

std::string to_json(const Report& r, bool timing) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["schema_version"] = r.schema_version;
  j["pinned_conventions"] = {{"epsilon", r.conventions.epsilon},
                             {"leibniz_twist", r.conventions.leibniz_twist},
                             {"trace_weights", r.conventions.trace_weights},
                             {"eq16_reading", r.conventions.eq16_reading}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["residual"] = c.residual;
    e["pass"] = c.pass;
    e["ms"] = timing ? static_cast<long long>(c.ms + 0.5) : 0LL;
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string to_text(const Report& r, bool timing) {
  std::string out = "suite " + r.suite + " (schema " + std::to_string(r.schema_version) + ")\n";
  out += "  epsilon:       " + r.conventions.epsilon + "\n";
  out += "  leibniz twist: " + r.conventions.leibniz_twist + "\n";
  out += "  trace weights: " + r.conventions.trace_weights + "\n";
  out += "  eq16 reading:  " + r.conventions.eq16_reading + "\n";
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    passed += c.pass;
    out += std::string(c.pass ? "PASS " : "FAIL ") + c.id + " [" + c.anchor + "]";
    if (timing) out += " " + format_ms(c.ms) + " ms";
    if (!c.pass) out += "\n     residual: " + c.residual;
    out += "\n";
  }
  out += (r.passed() ? "PASS " : "FAIL ") + std::to_string(passed) + "/" + std::to_string(r.checks.size()) +
         " checks\n";
  return out;
}

}  // namespace qtw::report
