#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cyclint/bqf.hpp"
#include "cyclint/forms.hpp"

namespace cyclint::cycle {

using Cplx = std::complex<double>;

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CycleResult {
  Cplx value{0, 0};
  double abs_error = 0;
  int panels = 0;
  double eps_sq = 0;  // upper integration limit
};

// (c_s * iy + d_s)^(-w) * F(sigma * iy), F evaluated through reduction.
Cplx slash_at(const forms::ModularObject& f, const std::array<double, 4>& sigma,
              double y);

// Same but with the raw evaluator (no fundamental-domain transport); used by
// the boundary check, which would be trivially zero otherwise.
Cplx slash_at_raw(const forms::ModularObject& f,
                  const std::array<double, 4>& sigma, double y);

// (-i)^k * integral_1^{eps^2} F_sigma(iy) y^(k-1) dy, with 2k the weight
// of F.  Q is normalized to a > 0 first.
CycleResult cycle_integral(const forms::ModularObject& f, const bqf::QuadForm& q,
                           double tol);

// Relative size of F_sigma(i eps^2) eps^w - F_sigma(i); vanishes for F
// transforming with weight w.
double closed_geodesic_check(const forms::ModularObject& f, const bqf::QuadForm& q);

// Adaptive Gauss-Legendre (order 16, bisection, two-level estimate) of a
// complex integrand over [a, b].
struct QuadResult {
  Cplx value;
  double abs_error;
  int panels;
};
template <typename F>
QuadResult adaptive_gauss(F&& f, double a, double b, double tol);

namespace detail {
const std::array<double, 16>& gl_nodes();
const std::array<double, 16>& gl_weights();
}  // namespace detail

template <typename F>
QuadResult adaptive_gauss(F&& f, double a, double b, double tol) {
  const auto& xs = detail::gl_nodes();
  const auto& ws = detail::gl_weights();
  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    Cplx s{0, 0};
    for (int i = 0; i < 16; ++i) s += ws[i] * f(mid + half * xs[i]);
    return half * s;
  };
  struct Seg {
    double lo, hi;
    Cplx coarse;
  };
  const double total = b - a;
  std::vector<Seg> stack{{a, b, panel(a, b)}};
  Cplx value{0, 0};
  double err = 0;
  int panels = 0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    if (++panels > 200000)
      throw QuadratureFailure("adaptive_gauss: panel budget exhausted");
    const double mid = 0.5 * (s.lo + s.hi);
    const Cplx left = panel(s.lo, mid), right = panel(mid, s.hi);
    const double e = std::abs(s.coarse - (left + right));
    if (e < tol * (s.hi - s.lo) / total || (s.hi - s.lo) < 1e-14 * total) {
      value += left + right;
      err += e;
    } else {
      stack.push_back({s.lo, mid, left});
      stack.push_back({mid, s.hi, right});
    }
  }
  return {value, err, panels};
}

}  // namespace cyclint::cycle
