#include "cyclint/cycle.hpp"

#include <cmath>

namespace cyclint::cycle {

namespace detail {

namespace {

// Legendre P_16 roots by Newton iteration; weights 2 / ((1-x^2) P'(x)^2).
struct GlTable {
  std::array<double, 16> nodes{};
  std::array<double, 16> weights{};
  GlTable() {
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GlTable& table() {
  static const GlTable t;
  return t;
}

}  // namespace

const std::array<double, 16>& gl_nodes() { return table().nodes; }
const std::array<double, 16>& gl_weights() { return table().weights; }

}  // namespace detail

Cplx slash_at(const forms::ModularObject& f, const std::array<double, 4>& sigma,
              double y) {
  if (y <= 0) throw std::invalid_argument("slash_at: y > 0 required");
  const Cplx iy{0, y};
  const Cplx j = sigma[2] * iy + sigma[3];
  const Cplx z = (sigma[0] * iy + sigma[1]) / j;
  return forms::ipow(j, -f.weight) * forms::eval_reduced(f, z);
}

Cplx slash_at_raw(const forms::ModularObject& f,
                  const std::array<double, 4>& sigma, double y) {
  const Cplx iy{0, y};
  const Cplx j = sigma[2] * iy + sigma[3];
  const Cplx z = (sigma[0] * iy + sigma[1]) / j;
  return forms::ipow(j, -f.weight) * forms::eval_raw(f, z);
}

CycleResult cycle_integral(const forms::ModularObject& f, const bqf::QuadForm& q,
                           double tol) {
  if (!bqf::is_admissible(q))
    throw std::invalid_argument("cycle_integral: inadmissible form " + q.str());
  if (f.weight % 2 != 0)
    throw std::invalid_argument("cycle_integral: weight must be even");
  auto [qn, m] = bqf::normalize_positive_a(q);
  const auto fr = bqf::frame(qn);
  const int k = f.weight / 2;
  const double eps_sq = fr.eps * fr.eps;

  auto integrand = [&](double y) {
    return slash_at(f, fr.sigma, y) * std::pow(y, k - 1.0);
  };
  const auto quad = adaptive_gauss(integrand, 1.0, eps_sq, tol);

  // The D^((1-k)/2) normalization of the cycle integral cancels against
  // Q o sigma = [0, -sqrt(D), 0] in the parametrization; the normalized
  // integral is exactly (-i)^k times the y-integral.
  const Cplx norm = forms::ipow(Cplx{0, -1}, k);
  CycleResult r;
  r.value = norm * quad.value;
  r.abs_error = std::abs(norm) * quad.abs_error;
  r.panels = quad.panels;
  r.eps_sq = eps_sq;
  return r;
}

double closed_geodesic_check(const forms::ModularObject& f,
                             const bqf::QuadForm& q) {
  auto [qn, m] = bqf::normalize_positive_a(q);
  const auto fr = bqf::frame(qn);
  const double eps_sq = fr.eps * fr.eps;
  const Cplx at_top = slash_at_raw(f, fr.sigma, eps_sq);
  const Cplx at_one = slash_at_raw(f, fr.sigma, 1.0);
  const Cplx boundary = at_top * std::pow(fr.eps, static_cast<double>(f.weight)) -
                        at_one;
  return std::abs(boundary) / std::max(1.0, std::abs(at_one));
}

}  // namespace cyclint::cycle
