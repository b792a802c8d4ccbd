#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cyclint/bqf.hpp"
#include "cyclint/cycle.hpp"
#include "cyclint/forms.hpp"

namespace cyclint::verify {

using Cplx = std::complex<double>;

struct IdentityReport {
  std::string identity;
  std::string family;
  std::string form;  // "a,b,c"
  long long D = 0;
  Cplx lhs{0, 0}, rhs{0, 0};
  double abs_residual = 0;
  double rel_residual = 0;
  double tol = 0;
  bool pass = false;
  double wall_time = 0;  // seconds; kept out of the serialized rows
};

// |lhs - rhs| / max(|lhs|, |rhs|, 1e-30)
double rel_residual(Cplx lhs, Cplx rhs);

IdentityReport make_report(std::string identity, std::string family,
                           const bqf::QuadForm& q, Cplx lhs, Cplx rhs, double tol);

// Numerical harmonicity: |(Delta F)(z)| / max(1, |F(z)|) < tol at 5 reduced points.
bool is_harmonic_numeric(const forms::ModularObject& f, double tol = 1e-8);

// C(LF) = C(RF) = conj(C(xi F)) for smooth modular F of weight 2-2k.
std::vector<IdentityReport> check_first_identity(const forms::ModularObject& f,
                                                 const bqf::QuadForm& q,
                                                 double quad_tol, double tol);

enum class Side { R, L };

// C(R^{k-l}F) = ((k+l)(k-l-1) - lambda) C(R^{k-l-2}F) for l <= k-2,
// and the mirrored L version for l <= -k.
IdentityReport check_recursion(const forms::ModularObject& f, const bqf::QuadForm& q,
                               int ell, Side side, double quad_tol, double tol);

// R branch (k >= 1, 1 <= j <= k):
//   C(R^{2j-1}F) = (j-1)!(k-j)!(2k-2)! / ((k-1)!(2k-2j)!) * conj(C(xi F))
// L branch (k <= 0, 0 <= j <= |k|):
//   C(L^{2j+1}F) = (2j)!|k|! / (j!(|k|-j)!) * conj(C(xi F))
IdentityReport check_corollary(const forms::ModularObject& f, const bqf::QuadForm& q,
                               int j, double quad_tol, double tol);

// C(D^{2k-1}F) = -((2k-2)!/(4 pi)^{2k-1}) * conj(C(xi F)), harmonic F, k >= 1.
IdentityReport check_bgk(const forms::ModularObject& f, const bqf::QuadForm& q,
                         double quad_tol, double tol);

struct SuiteConfig {
  std::string suite = "default";
  double tol_termsum = 1e-6;
  double tol_lattice = 1e-4;
  double quad_tol = 1e-9;
  int qexp_M = 24;
  int lattice_N = 400;
  int threads = 1;
  std::vector<long long> thm_discs = {5, 8, 13};
};

std::vector<IdentityReport> run_suite(const SuiteConfig& cfg);

bool all_pass(const std::vector<IdentityReport>& reports);
bool any_input_error(const std::vector<IdentityReport>& reports);

// Deterministic serializations; wall_time goes to the separate metadata object.
std::string reports_to_json(const std::vector<IdentityReport>& reports);
std::string reports_to_csv(const std::vector<IdentityReport>& reports);
std::string reports_metadata_json(const std::vector<IdentityReport>& reports);

}  // namespace cyclint::verify
