#pragma once

// Small dense-polynomial utilities used by the steady-state and stability
// code. Coefficient arrays are stored highest degree first:
//   p(x) = c[0] x^n + c[1] x^(n-1) + ... + c[n].

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "sqzcool/error.hpp"

namespace sqzcool::poly {

template <class T>
T horner(const std::vector<T>& c, T x) {
  T acc{0};
  for (const auto& ci : c) acc = acc * x + ci;
  return acc;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
  std::vector<double> d;
  const auto n = static_cast<int>(c.size()) - 1;
  for (int i = 0; i < n; ++i) d.push_back(c[static_cast<std::size_t>(i)] * (n - i));
  return d;
}

/// Complex roots from the eigenvalues of the companion matrix.
inline std::vector<std::complex<double>> companion_roots(const std::vector<double>& c) {
  std::size_t lead = 0;
  while (lead < c.size() && c[lead] == 0.0) ++lead;
  if (lead == c.size()) throw DomainError("companion_roots: zero polynomial");
  const auto n = static_cast<Eigen::Index>(c.size() - lead - 1);
  if (n == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    comp(0, j) = -c[lead + 1 + static_cast<std::size_t>(j)] / c[lead];
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw ComputationError("companion eigen-solver did not converge");
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

/// Newton iterations from x0; stops on stagnation. Returns the polished root.
inline double newton_polish(const std::vector<double>& c, double x0, int max_iter = 50) {
  const auto dc = derivative(c);
  double x = x0;
  double best = x0;
  double best_res = std::abs(horner(c, x0));
  for (int it = 0; it < max_iter; ++it) {
    const double f = horner(c, x);
    const double df = horner(dc, x);
    if (df == 0.0 || !std::isfinite(f)) break;
    const double step = f / df;
    x -= step;
    const double res = std::abs(horner(c, x));
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) break;
  }
  return best;
}

/// All real roots of a real cubic (or lower degree), ascending, Newton
/// polished. Near-double roots show up as eigenvalue pairs with a tiny
/// imaginary part; those are accepted when polishing drives the residual to
/// rounding level.
inline std::vector<double> real_roots(const std::vector<double>& c) {
  const auto roots = companion_roots(c);
  double scale = 0.0;
  for (const auto& z : roots) scale = std::max(scale, std::abs(z));
  scale = std::max(scale, 1.0);

  std::vector<double> out;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) > 1e-6 * scale) continue;
    const double x = newton_polish(c, z.real());
    // residual relative to the size of the terms being summed
    double term_mag = 0.0;
    double p = 1.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      term_mag = std::max(term_mag, std::abs(*it * p));
      p *= std::abs(x);
    }
    if (std::abs(horner(c, x)) > 1e-9 * std::max(term_mag, 1e-300) && std::abs(z.imag()) > 0.0)
      continue;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  // A double root comes back as two copies that agree only to ~sqrt(eps);
  // merge neighbours when the derivative also vanishes between them.
  const auto dc = derivative(c);
  auto near_multiple = [&](double a, double b) {
    if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(a))) return false;
    const double m = 0.5 * (a + b);
    double mag = 0.0;
    double p = 1.0;
    for (auto it = dc.rbegin(); it != dc.rend(); ++it) {
      mag = std::max(mag, std::abs(*it * p));
      p *= std::abs(m);
    }
    return std::abs(horner(dc, m)) <= 1e-5 * std::max(mag, 1e-300);
  };
  std::vector<double> uniq;
  for (double x : out) {
    if (!uniq.empty() && (x == uniq.back() || near_multiple(uniq.back(), x))) continue;
    uniq.push_back(x);
  }
  return uniq;
}

struct RouthResult {
  bool stable = false;            ///< all first-column entries strictly positive
  int sign_changes = 0;           ///< number of right-half-plane roots when no zero pivots
  bool zero_pivot = false;        ///< a first-column entry vanished (marginal / singular case)
  std::vector<double> first_column;
};

/// Routh array for a real polynomial with positive leading coefficient.
/// Strict Hurwitz stability holds iff every first-column entry is > 0.
inline RouthResult routh_hurwitz(const std::vector<double>& c) {
  RouthResult res;
  if (c.empty() || c[0] == 0.0) throw DomainError("routh_hurwitz: leading coefficient must be nonzero");
  const std::size_t n = c.size() - 1;
  const std::size_t width = n / 2 + 1;
  std::vector<std::vector<double>> table(n + 1, std::vector<double>(width, 0.0));
  const double sgn = c[0] > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i <= n; ++i) table[i % 2][i / 2] = sgn * c[i];

  for (std::size_t row = 2; row <= n; ++row) {
    const double pivot = table[row - 1][0];
    if (pivot == 0.0) {
      res.zero_pivot = true;
      break;
    }
    for (std::size_t j = 0; j + 1 < width; ++j) {
      table[row][j] = (pivot * table[row - 2][j + 1] - table[row - 2][0] * table[row - 1][j + 1]) / pivot;
    }
  }
  res.stable = !res.zero_pivot;
  for (std::size_t row = 0; row <= n; ++row) {
    const double v = table[row][0];
    res.first_column.push_back(v);
    if (!(v > 0.0)) res.stable = false;
    if (v == 0.0 && row > 0) res.zero_pivot = true;
  }
  for (std::size_t row = 1; row <= n; ++row) {
    if ((res.first_column[row] < 0.0) != (res.first_column[row - 1] < 0.0)) ++res.sign_changes;
  }
  return res;
}

}  // namespace sqzcool::poly
