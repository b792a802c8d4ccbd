#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cyclint/bqf.hpp"
#include "cyclint/wirtinger.hpp"

namespace cyclint::forms {

using Cplx = std::complex<double>;

// z^n for integer n by repeated multiplication; no log/branch choices.
Cplx ipow(Cplx z, int n);

// Holomorphic q-series sum_{n=0}^{M} a_n e^{2 pi i n z}.
struct QExpansion {
  int weight = 0;
  std::vector<Cplx> coeffs;  // a_0 .. a_M

  int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
};

enum class StandardForm { E2, E4, E6, Delta };

QExpansion standard_qexp(StandardForm name, int M);
QExpansion standard_qexp(const std::string& name, int M);

Cplx eval_qexp(const QExpansion& f, Cplx z);
wirt::TermSum qexp_to_termsum(const QExpansion& f);

// sum over coprime (c,d), one representative per +-pair, of seed|_w (a b; c d).
// The seed must be invariant under z -> z+1 so the coset sum is well defined.
// Evaluation Richardson-extrapolates the N and N/2 truncations against the
// leading N^(2-e) tail.
struct Eisenstein {
  wirt::TermSum seed;  // seed.weight == weight
  int weight = 0;
  int trunc_N = 200;

  double conv_exponent() const;  // 2 * max ypow + weight; needs > 2
};

struct ModularObject {
  std::variant<wirt::TermSum, QExpansion, Eisenstein> rep;
  int weight = 0;
  std::optional<Cplx> eigenvalue;
  std::string label;
};

ModularObject from_termsum(wirt::TermSum f, std::optional<Cplx> eigenvalue = {},
                           std::string label = "termsum");
ModularObject from_qexp(QExpansion f, std::string label);

// F = y^j g(z) conj(h(z)); requires j = weight(h), giving pure weight
// weight(g) - weight(h).
ModularObject product_form(const QExpansion& g, const QExpansion& h, int j);

// E(z, s): seed y^s, weight 0, eigenvalue s(1-s).  Requires s > 1.
ModularObject eisenstein_real_analytic(double s, int N);
// Harmonic Eisenstein series of weight 2-2k: seed y^(2k-1).  Requires k >= 2.
ModularObject eisenstein_harmonic(int k, int N);
// Generic builder; checks convergence exponent > 2.
ModularObject eisenstein(wirt::TermSum seed, int N,
                         std::optional<Cplx> eigenvalue = {},
                         std::string label = "eisenstein");

// Completed E2: 1 - 24 sum sigma_1(n) q^n - 3/(pi y); weight 2, harmonic.
ModularObject e2_completion(int M);

enum class Op { L, R, Xi, Laplacian };

ModularObject apply_operator(const ModularObject& f, Op op);
ModularObject apply_bol(const ModularObject& f, int n);

// Move z to the standard fundamental domain; returns (z', gamma) with
// z' = gamma z, |Re z'| <= 1/2, |z'| >= 1.
std::pair<Cplx, bqf::Mat2> fd_reduce(Cplx z);

Cplx eval_raw(const ModularObject& f, Cplx z);
// Evaluate at the reduced point and transport by the exact automorphy factor.
Cplx eval_reduced(const ModularObject& f, Cplx z);

// Double trunc_N from `start` until successive evaluations at probe points
// differ by less than tol; capped at `cap`.
int choose_lattice_N(const Eisenstein& e, double tol, int start = 100,
                     int cap = 1600);

// sigma_k(n) divisor power sums for 1..M.
std::vector<long long> divisor_sigma(int k, int M);

}  // namespace cyclint::forms
