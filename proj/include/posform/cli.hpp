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

#pragma once

// The posform command-line front end, callable in-process.
//
//   posform run [--tol x] [--report path] [--quiet] <file>...
//   posform validate [--tol x] [--report path] [--quiet] <file>...
//   posform witness-antilattice [--report path] [--quiet] <file>
//   posform version
//
// Exit codes: 0 success, 2 parse/schema, 3 validation, 4 zero-probability
// conditioning, 5 internal error. With several files the first non-zero
// code in input order is returned.

#include <ostream>
#include <string>
#include <vector>

namespace posform::cli {

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posform::cli
