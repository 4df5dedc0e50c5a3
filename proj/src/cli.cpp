// Copyright 2026 The posform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "posform/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "posform/errors.hpp"
#include "posform/lattice.hpp"
#include "posform/scenario.hpp"

#ifndef POSFORM_VERSION
#define POSFORM_VERSION "0.0.0"
#endif

namespace posform::cli {

namespace {

using scenario::ExitCode;
using scenario::ScenarioError;

struct FileResult {
  int code = 0;
  std::string report;
  std::string diagnostic;
};

FileResult failure(ExitCode code, const std::string& file, const std::string& msg) {
  return {static_cast<int>(code), "", file + ": " + msg};
}

FileResult run_file(const std::string& file, const scenario::Options& options) {
  try {
    const scenario::ScenarioDoc doc = scenario::parse_scenario(file);
    const scenario::ResolvedScenario resolved = scenario::resolve(doc);
    const auto checks = scenario::validate_scenario(doc, resolved, options);
    if (!scenario::all_passed(checks)) {
      return {static_cast<int>(ExitCode::validation), scenario::validation_to_string(checks),
              file + ": validation failed"};
    }
    return {0, scenario::report_to_string(scenario::run_scenario(doc, options)), ""};
  } catch (const ScenarioError& e) {
    return failure(e.code(), file, e.what());
  } catch (const std::exception& e) {
    return failure(ExitCode::internal, file, std::string("internal error: ") + e.what());
  }
}

FileResult validate_file(const std::string& file, const scenario::Options& options) {
  try {
    const auto checks = scenario::validate_scenario(scenario::parse_scenario(file), options);
    const bool ok = scenario::all_passed(checks);
    return {ok ? 0 : static_cast<int>(ExitCode::validation), scenario::validation_to_string(checks),
            ok ? "" : file + ": validation failed"};
  } catch (const ScenarioError& e) {
    return failure(e.code(), file, e.what());
  } catch (const std::exception& e) {
    return failure(ExitCode::internal, file, std::string("internal error: ") + e.what());
  }
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string matrix_text(const CMatrix& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out += (j ? ", [" : "[") + format_real(m(i, j).real()) + ", " + format_real(m(i, j).imag()) + "]";
    }
    out += "]";
  }
  return out + "]";
}

CMatrix read_matrix(const nlohmann::json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ScenarioError(ExitCode::parse, "schema error: missing field '" + key + "'");
  if (!it->is_array() || it->empty()) {
    throw ScenarioError(ExitCode::parse, "schema error at " + key + ": expected a matrix");
  }
  const auto n = static_cast<Eigen::Index>(it->size());
  CMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = (*it)[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ScenarioError(ExitCode::parse, "schema error at " + key + ": expected rows");
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw ScenarioError(ExitCode::validation, "invalid " + key + ": matrix is not square");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& z = row[static_cast<std::size_t>(c)];
      if (z.is_number()) {
        m(r, c) = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
      } else {
        throw ScenarioError(ExitCode::parse, "schema error at " + key + ": expected a number or [re, im]");
      }
    }
  }
  return m;
}

FileResult witness_file(const std::string& file) {
  try {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ScenarioError(ExitCode::parse, "cannot read " + file);
    std::ostringstream text;
    text << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ScenarioError(ExitCode::parse, std::string("syntax error: ") + e.what());
    }
    if (!j.is_object()) throw ScenarioError(ExitCode::parse, "schema error: expected an object");
    for (const auto& item : j.items()) {
      if (item.key() != "A" && item.key() != "B" && item.key() != "resolution") {
        throw ScenarioError(ExitCode::parse, "schema error: unknown field '" + item.key() + "'");
      }
    }
    AntiLatticeOptions options;
    if (j.contains("resolution")) {
      if (!j["resolution"].is_number()) throw ScenarioError(ExitCode::parse, "schema error at resolution: expected a number");
      options.resolution = j["resolution"].get<double>();
      if (!(options.resolution > 0.0 && options.resolution <= 1.0)) {
        throw ScenarioError(ExitCode::validation, "invalid resolution: must lie in (0, 1]");
      }
    }
    const CMatrix a = read_matrix(j, "A");
    const CMatrix b = read_matrix(j, "B");
    AntiLatticeResult result;
    try {
      result = anti_lattice_witness(a, b, options);
    } catch (const Error& e) {
      throw ScenarioError(ExitCode::validation, e.what());
    }
    std::string out = "{\n";
    if (const auto* cmp = std::get_if<ComparableReport>(&result)) {
      out += "  \"result\": \"comparable\",\n  \"verdict\": \"" + std::string(to_string(cmp->verdict)) + "\"\n}\n";
      return {0, out, ""};
    }
    const auto& w = std::get<AntiLatticeWitness>(result);
    out += "  \"result\": \"witness\",\n";
    out += "  \"C1\": " + matrix_text(w.c1) + ",\n";
    out += "  \"C2\": " + matrix_text(w.c2) + ",\n";
    out += std::string("  \"certificates_hold\": ") + (w.certificates_hold ? "true" : "false") + ",\n";
    out += "  \"grid_resolution\": " + format_real(options.resolution) + ",\n";
    out += "  \"grid_lower_bounds\": " + std::to_string(w.grid_lower_bounds) + ",\n";
    out += "  \"dominating_bound\": " + (w.dominating_bound ? matrix_text(*w.dominating_bound) : "null") + "\n}\n";
    if (!w.certificates_hold) return {static_cast<int>(ExitCode::internal), out, file + ": certificates failed"};
    return {0, out, ""};
  } catch (const ScenarioError& e) {
    return failure(e.code(), file, e.what());
  } catch (const std::exception& e) {
    return failure(ExitCode::internal, file, std::string("internal error: ") + e.what());
  }
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"posform: positive-formalism scenarios", "posform"};
  app.require_subcommand(1);

  double tol = kDefaultTol;
  std::string report_path;
  bool quiet = false;
  std::vector<std::string> files;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--report", report_path, "Write reports to this file instead of stdout");
    sub->add_flag("--quiet", quiet, "Suppress stdout reports and diagnostics");
  };

  CLI::App* run = app.add_subcommand("run", "Validate and run scenario files");
  run->add_option("--tol", tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  add_common(run);
  run->add_option("files", files, "Scenario files")->required();

  CLI::App* validate = app.add_subcommand("validate", "Validate scenario files");
  validate->add_option("--tol", tol, "Numerical tolerance")->check(CLI::PositiveNumber);
  add_common(validate);
  validate->add_option("files", files, "Scenario files")->required();

  CLI::App* witness = app.add_subcommand("witness-antilattice", "Anti-lattice witness for two 2x2 matrices");
  add_common(witness);
  witness->add_option("files", files, "Input files with matrices A and B")->required();

  CLI::App* version = app.add_subcommand("version", "Print the version");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::parse);
  }

  if (version->parsed()) {
    out << "posform " << POSFORM_VERSION << "\n";
    return 0;
  }

  scenario::Options options;
  options.tol = tol;
  std::vector<std::future<FileResult>> jobs;
  for (const auto& file : files) {
    if (run->parsed()) {
      jobs.push_back(std::async(std::launch::async, run_file, file, options));
    } else if (validate->parsed()) {
      jobs.push_back(std::async(std::launch::async, validate_file, file, options));
    } else {
      jobs.push_back(std::async(std::launch::async, witness_file, file));
    }
  }

  std::ofstream report_file;
  if (!report_path.empty()) {
    report_file.open(report_path, std::ios::binary);
    if (!report_file) {
      if (!quiet) err << "error: cannot write " << report_path << "\n";
      return static_cast<int>(ExitCode::internal);
    }
  }
  int code = 0;
  for (auto& job : jobs) {
    const FileResult r = job.get();
    if (!r.report.empty()) {
      if (report_file.is_open()) {
        report_file << r.report;
      } else if (!quiet) {
        out << r.report;
      }
    }
    if (!r.diagnostic.empty() && !quiet) err << "error: " << r.diagnostic << "\n";
    if (code == 0) code = r.code;
  }
  return code;
}

}  // namespace posform::cli
