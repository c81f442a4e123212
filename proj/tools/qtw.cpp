#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtw/expr.hpp"
#include "qtw/suites.hpp"
#include "qtw/twistor.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::optional<qtw::Rational> parse_q(const std::string& text) {
  if (text.empty()) return std::nullopt;
  qtw::Rational q = qtw::parse_rational(text);
  if (q == 0) throw std::invalid_argument("--q must be nonzero");
  return q;
}

bool mentions_derivatives(const qtw::expr::Expr& e) {
  if (e.kind == qtw::expr::Expr::Kind::Gen && e.name == "D") return true;
  for (const auto& k : e.kids)
    if (mentions_derivatives(k)) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of q-deformed twistor and instanton identities"};
  app.require_subcommand(1);

  std::string suite, report_format = "text", out_file, q_text;
  int n = 0, k = 0, k_inst = 0;
  bool no_timing = false;
  auto* check = app.add_subcommand("check", "Run a verification suite");
  check->add_option("suite", suite, "Suite name")->required();
  auto* n_opt = check->add_option("--n", n, "Gauge size (adhm) or R-matrix size (rmx)");
  auto* k_opt = check->add_option("--k", k, "ADHM instanton number");
  auto* ki_opt = check->add_option("--k-inst", k_inst, "Number of t'Hooft terms");
  check->add_option("--q", q_text, "Specialize q to this nonzero rational");
  check->add_option("--report", report_format, "Report format")->check(CLI::IsMember({"text", "json"}));
  check->add_option("--out", out_file, "Write the report to FILE");
  check->add_flag("--no-timing", no_timing, "Write every check time as 0");

  std::string expr_file, reduce_q;
  auto* reduce = app.add_subcommand("reduce", "Print the normal form of an expression");
  reduce->add_option("file", expr_file, "Expression file")->required();
  reduce->add_option("--q", reduce_q, "Specialize q to this nonzero rational");
  auto* parse = app.add_subcommand("parse", "Validate an expression and print it canonically");
  parse->add_option("file", expr_file, "Expression file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*check) {
      qtw::suites::Params p;
      if (*n_opt) p.n = n;
      if (*k_opt) p.k = k;
      if (*ki_opt) p.k_inst = k_inst;
      p.q = parse_q(q_text);
      const auto rep = qtw::suites::run_suite(suite, p);
      const std::string body = report_format == "json" ? qtw::report::to_json(rep, !no_timing)
                                                        : qtw::report::to_text(rep, !no_timing);
      if (out_file.empty()) {
        std::cout << body;
      } else {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot write " + out_file);
        out << body;
        std::cout << (rep.passed() ? "PASS " : "FAIL ") << suite << "\n";
      }
      return rep.passed() ? kPass : kFail;
    }

    const std::string source = read_file(expr_file);
    const qtw::tw::TwistorAlgebra alg({1, true, *reduce ? parse_q(reduce_q) : std::nullopt, 0});
    const auto ast = qtw::expr::parse(source, alg.reg());
    if (*parse) {
      std::cout << qtw::expr::render(ast) << "\n";
      return kPass;
    }
    const auto& rs = mentions_derivatives(ast) ? alg.weyl() : alg.forms();
    qtw::nc::NcPoly poly = qtw::expr::to_poly(ast, rs);
    if (auto q = parse_q(reduce_q)) poly = poly.specialized(*q);
    std::cout << qtw::nc::render(alg.reg(), rs.normal_form(poly)) << "\n";
    return kPass;
  } catch (const qtw::expr::ParseError& e) {
    std::cerr << expr_file << ": " << e.what() << "\n";
    return kUsage;
  } catch (const qtw::suites::UsageError& e) {
    std::cerr << "qtw: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qtw: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qtw: " << e.what() << "\n";
    return kUsage;
  }
}
