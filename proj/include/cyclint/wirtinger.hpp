#pragma once

#include <complex>
#include <vector>

namespace cyclint::wirt {

using Cplx = std::complex<double>;

// One term c * y^a * exp(alpha*z + beta*zbar), z = x + iy in the upper
// half-plane.  This class of functions is closed under L, R, xi, Delta
// and d/dz, which is all the operator calculus here needs.
struct Atom {
  Cplx coeff{0.0, 0.0};
  double ypow = 0.0;
  Cplx alpha{0.0, 0.0};
  Cplx beta{0.0, 0.0};
};

// Finite sum of atoms with a declared (even) transformation weight.
struct TermSum {
  std::vector<Atom> atoms;
  int weight = 0;

  static TermSum zero(int weight) { return TermSum{{}, weight}; }
  static TermSum single(Cplx c, double ypow, Cplx alpha, Cplx beta, int weight) {
    return TermSum{{Atom{c, ypow, alpha, beta}}, weight};
  }
  static TermSum constant(Cplx c, int weight) {
    return single(c, 0.0, {0, 0}, {0, 0}, weight);
  }
  bool empty() const { return atoms.empty(); }
  std::size_t size() const { return atoms.size(); }
};

// Sort by (ypow, alpha, beta), merge equal keys, drop coefficients below
// 1e-15 of the absolute mass merged into their key.
TermSum normalize(TermSum f);

Cplx eval(const TermSum& f, Cplx z);

// Raw Wirtinger derivatives (weight is passed through unchanged).
TermSum dz(const TermSum& f);
TermSum dzbar(const TermSum& f);

// L = -2i y^2 d/dzbar, weight w -> w-2.
TermSum lower(const TermSum& f);
// R_w = 2i d/dz + w/y, weight w -> w+2.
TermSum raise(const TermSum& f);
// xi_w F = 2i y^w conj(d/dzbar F), weight w -> 2-w.  Antilinear.
TermSum xi(const TermSum& f);
// Delta_w = -(L o R + w), cross-checked against -R o L; weight unchanged.
TermSum laplacian(const TermSum& f);
// (1/(2 pi i) d/dz)^n; declared weight shifts by +2n (the Bol regime).
TermSum bol(const TermSum& f, int n);

TermSum conjugate(const TermSum& f);
TermSum multiply(const TermSum& f, const TermSum& g);
TermSum scale(const TermSum& f, Cplx c);
TermSum add(const TermSum& f, const TermSum& g);
TermSum iterate_raise(TermSum f, int n);
TermSum iterate_lower(TermSum f, int n);

// Max relative deviation of the symbolic d/dz and d/dzbar against central
// finite differences at z with step h.  Denominator floored at 1.
struct FdResidual {
  double dz_res;
  double dzbar_res;
};
FdResidual fd_check(const TermSum& f, Cplx z, double h);

}  // namespace cyclint::wirt
