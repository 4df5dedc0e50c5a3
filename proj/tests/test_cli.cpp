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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "posform/cli.hpp"

namespace {

const std::string kData = POSFORM_TEST_DATA;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = posform::cli::main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("version") {
  const Result r = run({"version"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("posform ", 0) == 0);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"run"}).code == 2);
  CHECK(run({"run", "--tol", "abc", "x.json"}).code == 2);
}

TEST_CASE("golden reports") {
  for (const char* name : {"quantum_z_then_x", "classical_indicator_chain", "post_selected_chain"}) {
    const std::string base = kData + "/golden/" + name;
    const Result r = run({"run", base + ".json"});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(base + ".report.json"));
    CHECK(run({"run", base + ".json"}).out == r.out);
  }
}

TEST_CASE("exit codes on malformed input") {
  const std::vector<std::pair<std::string, int>> cases{
      {"syntax_error", 2},       {"missing_model", 2},       {"unknown_field", 2},
      {"zero_measure", 3},       {"dimension_mismatch", 3},  {"incomplete_outcomes", 3},
      {"transpose_step", 3},     {"zero_probability", 4}};
  for (const auto& [name, code] : cases) {
    const Result r = run({"run", kData + "/malformed/" + name + ".json"});
    CHECK_MESSAGE(r.code == code, name);
    CHECK_FALSE(r.err.empty());
  }
  const Result z = run({"run", kData + "/malformed/zero_probability.json"});
  CHECK(z.err.find("step 1 (Z)") != std::string::npos);
  CHECK(run({"run", kData + "/malformed/does_not_exist.json"}).code == 2);
  CHECK(run({"validate", kData + "/malformed/transpose_step.json"}).code == 3);
  CHECK(run({"validate", kData + "/golden/quantum_z_then_x.json"}).code == 0);
}

TEST_CASE("several files keep input order") {
  const std::string a = kData + "/golden/quantum_z_then_x";
  const std::string b = kData + "/golden/classical_indicator_chain";
  const Result r = run({"run", b + ".json", a + ".json", kData + "/malformed/zero_probability.json"});
  CHECK(r.code == 4);
  CHECK(r.out == slurp(b + ".report.json") + slurp(a + ".report.json"));
  const Result mixed = run({"run", kData + "/malformed/missing_model.json", kData + "/malformed/zero_measure.json"});
  CHECK(mixed.code == 2);
}

TEST_CASE("--report and --quiet") {
  const std::string base = kData + "/golden/classical_indicator_chain";
  const auto path = std::filesystem::temp_directory_path() / "posform_cli_report.json";
  const Result r = run({"run", "--quiet", "--report", path.string(), base + ".json"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path.string()) == slurp(base + ".report.json"));
  std::filesystem::remove(path);
  const Result q = run({"run", "--quiet", kData + "/malformed/zero_probability.json"});
  CHECK(q.code == 4);
  CHECK(q.err.empty());
}

TEST_CASE("witness-antilattice") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto write = [&](const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  };
  const Result w = run({"witness-antilattice", write("posform_w1.json", R"({"A": [[1, 0], [0, 0]], "B": [[0, 0], [0, 1]]})")});
  CHECK(w.code == 0);
  CHECK(w.out.find("\"result\": \"witness\"") != std::string::npos);
  CHECK(w.out.find("\"certificates_hold\": true") != std::string::npos);
  CHECK(w.out.find("\"dominating_bound\": null") != std::string::npos);
  const Result c = run({"witness-antilattice", write("posform_w2.json", R"({"A": [[1, 0], [0, 1]], "B": [[2, 0], [0, 2]]})")});
  CHECK(c.code == 0);
  CHECK(c.out.find("\"verdict\": \"less\"") != std::string::npos);
  CHECK(run({"witness-antilattice", write("posform_w3.json", R"({"A": [[1, 0], [0, -1]], "B": [[1, 0], [0, 1]]})")}).code == 3);
  CHECK(run({"witness-antilattice", write("posform_w4.json", R"({"A": [[1, 0], [0, 1]]})")}).code == 2);
  CHECK(run({"witness-antilattice", write("posform_w5.json", R"({"A": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                                                   "B": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})")}).code == 3);
}
