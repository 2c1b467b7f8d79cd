#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) integration over the real
// line. The caller seeds panel boundaries at known structure (peaks, kinks,
// cutoffs); the two outer tails are mapped onto (0, 1] with
// omega = edge +- L (1/t - 1), which is exact for integrands decaying at
// least like 1/omega^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "sqzcool/error.hpp"

namespace sqzcool::quad {

struct Options {
  double rel_tol = 1e-8;   ///< relative to the integral of |f|
  double abs_tol = 0.0;
  std::size_t max_panels = 50000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;  ///< sum of per-panel |K21 - G10| estimates
  double l1 = 0.0;     ///< K21 estimate of the integral of |f|
  std::size_t evaluations = 0;
  std::size_t panels = 0;
};

/// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {

// 21-point Kronrod abscissae (positive half, descending) and weights; the
// odd-indexed abscissae are the 10-point Gauss nodes.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

enum class Map { identity, upper_tail, lower_tail };

struct Panel {
  double a, b;  // in the mapped variable
  double value, error, l1;
};


template <class F>
struct Mapped {
  const F& f;
  Map map;
  double edge;
  double scale;

  double operator()(double t) const {
    switch (map) {
      case Map::identity:
        return f(t);
      case Map::upper_tail:
        return f(edge + scale * (1.0 / t - 1.0)) * scale / (t * t);
      case Map::lower_tail:
        return f(edge - scale * (1.0 / t - 1.0)) * scale / (t * t);
    }
    return 0.0;
  }
};

template <class G>
Panel gauss_kronrod21(const G& g, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(centre);
  double resk = wgk[10] * fc;
  double resg = 0.0;
  double resabs = std::abs(resk);
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * xgk[j];
    const double f1 = g(centre - dx);
    const double f2 = g(centre + dx);
    resk += wgk[j] * (f1 + f2);
    resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
  }
  return Panel{a, b, resk * half, std::abs((resk - resg) * half), resabs * std::abs(half)};
}

}  // namespace detail

/// Integrates f over (-inf, inf). `breakpoints` must contain at least two
/// finite values; they are sorted and de-duplicated here.
template <class F>
Result integrate_real_line(const F& f, std::vector<double> breakpoints, const Options& opt = {}) {
  using namespace detail;
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2) throw DomainError("integrate_real_line: need two distinct breakpoints");

  const double lo = breakpoints.front();
  const double hi = breakpoints.back();
  const double span = hi - lo;
  const Mapped<F> mid{f, Map::identity, 0.0, 0.0};
  const Mapped<F> up{f, Map::upper_tail, hi, std::max(std::abs(hi), 0.5 * span)};
  const Mapped<F> down{f, Map::lower_tail, lo, std::max(std::abs(lo), 0.5 * span)};

  struct Tagged {
    Panel p;
    Map map;
  };
  auto eval = [&](Map m, double a, double b) {
    switch (m) {
      case Map::identity: return gauss_kronrod21(mid, a, b);
      case Map::upper_tail: return gauss_kronrod21(up, a, b);
      case Map::lower_tail: return gauss_kronrod21(down, a, b);
    }
    return Panel{};
  };
  auto cmp = [](const Tagged& x, const Tagged& y) { return x.p.error < y.p.error; };
  std::priority_queue<Tagged, std::vector<Tagged>, decltype(cmp)> heap(cmp);

  Result res;
  double total_err = 0.0;
  double total_l1 = 0.0;
  auto push = [&](Map m, double a, double b) {
    const Panel p = eval(m, a, b);
    res.evaluations += 21;
    total_err += p.error;
    total_l1 += p.l1;
    heap.push({p, m});
  };
  push(Map::lower_tail, 0.0, 1.0);
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) push(Map::identity, breakpoints[j], breakpoints[j + 1]);
  push(Map::upper_tail, 0.0, 1.0);

  auto converged = [&] { return total_err <= std::max(opt.abs_tol, opt.rel_tol * total_l1); };

  while (!converged()) {
    if (heap.size() >= opt.max_panels) {
      CompensatedSum s;
      auto copy = heap;
      while (!copy.empty()) {
        s.add(copy.top().p.value);
        copy.pop();
      }
      throw ComputationError("adaptive quadrature did not converge within the panel budget", s.value(),
                             total_err);
    }
    const Tagged worst = heap.top();
    heap.pop();
    total_err -= worst.p.error;
    total_l1 -= worst.p.l1;
    const double m = 0.5 * (worst.p.a + worst.p.b);
    if (!(m > worst.p.a && m < worst.p.b)) {
      // cannot split further in floating point; keep the panel as final
      heap.push(worst);
      total_err += worst.p.error;
      total_l1 += worst.p.l1;
      throw ComputationError("adaptive quadrature reached floating-point resolution", 0.0, total_err);
    }
    push(worst.map, worst.p.a, m);
    push(worst.map, m, worst.p.b);
  }

  // deterministic final summation: order panels by map and position
  std::vector<Tagged> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Tagged& x, const Tagged& y) {
    if (x.map != y.map) return x.map < y.map;
    return x.p.a < y.p.a;
  });
  CompensatedSum value, err, l1;
  for (const auto& t : all) {
    value.add(t.p.value);
    err.add(t.p.error);
    l1.add(t.p.l1);
  }
  res.value = value.value();
  res.error = err.value();
  res.l1 = l1.value();
  res.panels = all.size();
  return res;
}

/// Adaptive integration over a finite interval [a, b] with interior breakpoints.
template <class F>
Result integrate_interval(const F& f, double a, double b, std::vector<double> interior = {},
                          const Options& opt = {}) {
  // Reuse the real-line driver with a zero integrand outside [a, b].
  interior.push_back(a);
  interior.push_back(b);
  std::erase_if(interior, [&](double x) { return x < a || x > b; });
  auto g = [&](double x) { return (x < a || x > b) ? 0.0 : f(x); };
  return integrate_real_line(g, std::move(interior), opt);
}

}  // namespace sqzcool::quad
