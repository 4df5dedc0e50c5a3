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

#include "posform/lattice.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "posform/errors.hpp"

namespace posform {

namespace {

// Relative PSD test; closed form for 2x2.
bool psd(const CMatrix& m, double tol) {
  double lo = 0.0;
  double hi = 0.0;
  if (m.rows() == 2) {
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(m(0, 1)));
    lo = mid - rad;
    hi = mid + rad;
  } else {
    const HermitianEigen eig = eigh(m);
    lo = eig.values(0);
    hi = eig.values(eig.values.size() - 1);
  }
  return lo >= -tol * std::max(std::abs(lo), std::abs(hi));
}

bool incomparable(const CMatrix& x, const CMatrix& y, double tol) {
  const CMatrix diff = y - x;
  if (max_abs(diff) <= tol * std::max(max_abs(x), max_abs(y))) return false;
  return !psd(diff, tol) && !psd(CMatrix(-diff), tol);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::less: return "less";
    case Verdict::greater: return "greater";
    case Verdict::equal: return "equal";
    case Verdict::incomparable: return "incomparable";
  }
  return "incomparable";
}

OrderRelation classify_order(const Element& b, const Element& c, double tol) {
  require_same_space(b, c, "classify_order");
  const Element diff = c - b;
  if (max_abs(diff.coords()) <= tol * std::max(max_abs(b.coords()), max_abs(c.coords()))) {
    return {Verdict::equal, std::nullopt};
  }
  if (is_positive(diff, tol)) return {Verdict::less, diff};
  if (is_positive(diff * -1.0, tol)) return {Verdict::greater, diff * -1.0};
  return {Verdict::incomparable, std::nullopt};
}

bool is_common_lower_bound(const CMatrix& a, const CMatrix& b, const CMatrix& c, double tol) {
  return psd(CMatrix(a - c), tol) && psd(CMatrix(b - c), tol);
}

bool verify_witness(const CMatrix& a, const CMatrix& b, const CMatrix& c1, const CMatrix& c2,
                    double tol) {
  return is_common_lower_bound(a, b, c1, tol) && is_common_lower_bound(a, b, c2, tol) &&
         incomparable(c1, c2, tol);
}

AntiLatticeResult anti_lattice_witness(const CMatrix& a, const CMatrix& b,
                                       const AntiLatticeOptions& options) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw UnsupportedError("anti_lattice_witness: only 2x2 matrices are supported");
  }
  const double tol = options.certificate_tol;
  for (const CMatrix* m : {&a, &b}) {
    if (!is_hermitian(*m, 1e-12 * std::max(1.0, max_abs(*m))) || !psd(*m, tol)) {
      throw DomainError("anti_lattice_witness: inputs must be positive semidefinite");
    }
  }
  if (!(options.resolution > 0.0 && options.resolution <= 1.0)) {
    throw DomainError("anti_lattice_witness: resolution must lie in (0, 1]");
  }

  const CMatrix d = a - b;
  if (max_abs(d) <= tol * std::max(max_abs(a), max_abs(b))) return ComparableReport{Verdict::equal};
  if (psd(d, tol)) return ComparableReport{Verdict::greater};
  if (psd(CMatrix(-d), tol)) return ComparableReport{Verdict::less};

  AntiLatticeWitness witness{};
  {
    // D is indefinite: eigenvalues -c^2 < 0 < a^2.
    const HermitianEigen eig = eigh(d);
    const double c_len = std::sqrt(-eig.values(0));
    const double a_len = std::sqrt(eig.values(1));
    const CVector v_minus = eig.vectors.col(0);
    const CVector v_plus = eig.vectors.col(1);
    const auto bound = [&](double tau) {
      const CVector x = a_len * std::cosh(tau) * v_plus + c_len * std::sinh(tau) * v_minus;
      return CMatrix(a - x * x.adjoint());
    };
    witness.c1 = bound(0.0);
    witness.c2 = bound(1.0);
    witness.certificates_hold = verify_witness(a, b, witness.c1, witness.c2, tol);
  }

  const double scale = std::max(max_eigenvalue(a), max_eigenvalue(b));
  const auto steps = static_cast<long>(std::llround(1.0 / options.resolution));
  const double step = scale / static_cast<double>(steps);
  const auto grid_matrix = [&](long i, long j, long k) {
    CMatrix c(2, 2);
    c << static_cast<double>(i) * step, static_cast<double>(j) * step,
        static_cast<double>(j) * step, static_cast<double>(k) * step;
    return c;
  };

  // Lexicographic traversal; collects lower bounds for the fallback pair.
  std::vector<CMatrix> lower_bounds;
  for (long i = -steps; i <= steps; ++i) {
    for (long j = -steps; j <= steps; ++j) {
      for (long k = -steps; k <= steps; ++k) {
        CMatrix c = grid_matrix(i, j, k);
        if (!is_common_lower_bound(a, b, c, tol)) continue;
        lower_bounds.push_back(std::move(c));
      }
    }
  }
  witness.grid_lower_bounds = lower_bounds.size();

  if (!witness.certificates_hold && !lower_bounds.empty()) {
    std::size_t top = 0;
    for (std::size_t n = 1; n < lower_bounds.size(); ++n) {
      if (lower_bounds[n].trace().real() > lower_bounds[top].trace().real() + 1e-12 * scale) top = n;
    }
    for (const CMatrix& candidate : lower_bounds) {
      if (incomparable(lower_bounds[top], candidate, tol)) {
        witness.c1 = lower_bounds[top];
        witness.c2 = candidate;
        witness.certificates_hold = verify_witness(a, b, witness.c1, witness.c2, tol);
        break;
      }
    }
  }

  for (const CMatrix& candidate : lower_bounds) {
    if (psd(CMatrix(candidate - witness.c1), tol) && psd(CMatrix(candidate - witness.c2), tol)) {
      witness.dominating_bound = candidate;
      break;
    }
  }
  return witness;
}

}  // namespace posform
