#include "cyclint/wirtinger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cyclint::wirt {

namespace {

constexpr double kDropRel = 1e-15;
// Exponents reached along different operator routes differ by rounding
// (e.g. a+2-1-1 vs a for non-dyadic a), so key matching is fuzzy.
constexpr double kKeyTol = 1e-9;

struct Key {
  double ypow;
  double ar, ai, br, bi;
  auto operator<=>(const Key&) const = default;
};

Key key_of(const Atom& a) {
  return {a.ypow, a.alpha.real(), a.alpha.imag(), a.beta.real(), a.beta.imag()};
}

bool key_close(const Key& x, const Key& y) {
  return std::abs(x.ypow - y.ypow) <= kKeyTol && std::abs(x.ar - y.ar) <= kKeyTol &&
         std::abs(x.ai - y.ai) <= kKeyTol && std::abs(x.br - y.br) <= kKeyTol &&
         std::abs(x.bi - y.bi) <= kKeyTol;
}

}  // namespace

TermSum normalize(TermSum f) {
  std::sort(f.atoms.begin(), f.atoms.end(),
            [](const Atom& x, const Atom& y) { return key_of(x) < key_of(y); });
  // Drop threshold is relative to the absolute mass that merged into each
  // key, not the global max: coefficients legitimately span many orders of
  // magnitude, and only cancellation residue should die here.
  std::vector<Atom> merged;
  std::vector<Key> keys;
  std::vector<double> mass;
  for (const Atom& a : f.atoms) {
    const Key k = key_of(a);
    std::size_t g = merged.size();
    for (std::size_t i = merged.size(); i-- > 0;)
      if (key_close(keys[i], k)) {
        g = i;
        break;
      }
    if (g < merged.size()) {
      merged[g].coeff += a.coeff;
      mass[g] += std::abs(a.coeff);
    } else {
      merged.push_back(a);
      keys.push_back(k);
      mass.push_back(std::abs(a.coeff));
    }
  }
  std::vector<Atom> kept;
  for (std::size_t i = 0; i < merged.size(); ++i)
    if (merged[i].coeff != Cplx{0, 0} &&
        std::abs(merged[i].coeff) > kDropRel * mass[i])
      kept.push_back(merged[i]);
  f.atoms = std::move(kept);
  return f;
}

Cplx eval(const TermSum& f, Cplx z) {
  if (z.imag() <= 0.0)
    throw std::invalid_argument("eval: z must be in the upper half-plane");
  const double y = z.imag();
  const Cplx zb = std::conj(z);
  Cplx s{0, 0};
  for (const Atom& a : f.atoms)
    s += a.coeff * std::pow(y, a.ypow) * std::exp(a.alpha * z + a.beta * zb);
  return s;
}

// dz: atom -> alpha*atom + (a/(2i)) * y^(a-1) atom
TermSum dz(const TermSum& f) {
  TermSum r = TermSum::zero(f.weight);
  for (const Atom& a : f.atoms) {
    if (a.alpha != Cplx{0, 0})
      r.atoms.push_back({a.coeff * a.alpha, a.ypow, a.alpha, a.beta});
    if (a.ypow != 0.0)
      r.atoms.push_back(
          {a.coeff * a.ypow / Cplx{0, 2}, a.ypow - 1, a.alpha, a.beta});
  }
  return normalize(std::move(r));
}

// dzbar: atom -> beta*atom + (a*i/2) * y^(a-1) atom
TermSum dzbar(const TermSum& f) {
  TermSum r = TermSum::zero(f.weight);
  for (const Atom& a : f.atoms) {
    if (a.beta != Cplx{0, 0})
      r.atoms.push_back({a.coeff * a.beta, a.ypow, a.alpha, a.beta});
    if (a.ypow != 0.0)
      r.atoms.push_back(
          {a.coeff * a.ypow * Cplx{0, 0.5}, a.ypow - 1, a.alpha, a.beta});
  }
  return normalize(std::move(r));
}

TermSum lower(const TermSum& f) {
  TermSum r = TermSum::zero(f.weight - 2);
  for (const Atom& a : f.atoms) {
    if (a.beta != Cplx{0, 0})
      r.atoms.push_back(
          {Cplx{0, -2} * a.coeff * a.beta, a.ypow + 2, a.alpha, a.beta});
    if (a.ypow != 0.0)
      r.atoms.push_back({a.coeff * a.ypow, a.ypow + 1, a.alpha, a.beta});
  }
  return normalize(std::move(r));
}

TermSum raise(const TermSum& f) {
  const double w = f.weight;
  TermSum r = TermSum::zero(f.weight + 2);
  for (const Atom& a : f.atoms) {
    if (a.alpha != Cplx{0, 0})
      r.atoms.push_back({Cplx{0, 2} * a.coeff * a.alpha, a.ypow, a.alpha, a.beta});
    if (a.ypow + w != 0.0)
      r.atoms.push_back({a.coeff * (a.ypow + w), a.ypow - 1, a.alpha, a.beta});
  }
  return normalize(std::move(r));
}

TermSum xi(const TermSum& f) {
  const double w = f.weight;
  TermSum r = TermSum::zero(2 - f.weight);
  for (const Atom& a : f.atoms) {
    // 2i y^w conj(dzbar atom); conjugation swaps (alpha, beta) -> (conj beta, conj alpha)
    if (a.beta != Cplx{0, 0})
      r.atoms.push_back({Cplx{0, 2} * std::conj(a.coeff * a.beta), a.ypow + w,
                         std::conj(a.beta), std::conj(a.alpha)});
    if (a.ypow != 0.0)
      r.atoms.push_back({std::conj(a.coeff) * a.ypow, a.ypow + w - 1,
                         std::conj(a.beta), std::conj(a.alpha)});
  }
  return normalize(std::move(r));
}

TermSum laplacian(const TermSum& f) {
  const int w = f.weight;
  // -(L_{w+2} R_w + w)
  TermSum routeA = scale(add(lower(raise(f)), scale(f, static_cast<double>(w))),
                         -1.0);
  routeA.weight = w;
  // -R_{w-2} L_w
  TermSum routeB = scale(raise(lower(f)), -1.0);
  routeB.weight = w;

  TermSum diff = normalize(add(routeA, scale(routeB, -1.0)));
  double maxc = 0.0;
  for (const Atom& a : routeA.atoms) maxc = std::max(maxc, std::abs(a.coeff));
  for (const Atom& a : diff.atoms)
    if (std::abs(a.coeff) > 1e-12 * std::max(1.0, maxc))
      throw std::logic_error("laplacian: composition routes disagree");
  return routeA;
}

TermSum bol(const TermSum& f, int n) {
  if (n < 0) throw std::invalid_argument("bol: n must be non-negative");
  TermSum r = f;
  const Cplx inv2pii = 1.0 / Cplx{0, 2 * M_PI};
  for (int i = 0; i < n; ++i) {
    int w = r.weight;
    r = scale(dz(r), inv2pii);
    r.weight = w + 2;
  }
  return r;
}

TermSum conjugate(const TermSum& f) {
  TermSum r = TermSum::zero(-f.weight);
  for (const Atom& a : f.atoms)
    r.atoms.push_back(
        {std::conj(a.coeff), a.ypow, std::conj(a.beta), std::conj(a.alpha)});
  return normalize(std::move(r));
}

TermSum multiply(const TermSum& f, const TermSum& g) {
  TermSum r = TermSum::zero(f.weight + g.weight);
  r.atoms.reserve(f.atoms.size() * g.atoms.size());
  for (const Atom& a : f.atoms)
    for (const Atom& b : g.atoms)
      r.atoms.push_back(
          {a.coeff * b.coeff, a.ypow + b.ypow, a.alpha + b.alpha, a.beta + b.beta});
  return normalize(std::move(r));
}

TermSum scale(const TermSum& f, Cplx c) {
  TermSum r = f;
  for (Atom& a : r.atoms) a.coeff *= c;
  return normalize(std::move(r));
}

TermSum add(const TermSum& f, const TermSum& g) {
  TermSum r = f;
  r.atoms.insert(r.atoms.end(), g.atoms.begin(), g.atoms.end());
  return normalize(std::move(r));
}

TermSum iterate_raise(TermSum f, int n) {
  for (int i = 0; i < n; ++i) f = raise(f);
  return f;
}

TermSum iterate_lower(TermSum f, int n) {
  for (int i = 0; i < n; ++i) f = lower(f);
  return f;
}

FdResidual fd_check(const TermSum& f, Cplx z, double h) {
  if (z.imag() <= h)
    throw std::invalid_argument("fd_check: need Im z > h");
  const Cplx fxp = eval(f, z + h), fxm = eval(f, z - h);
  const Cplx fyp = eval(f, z + Cplx{0, h}), fym = eval(f, z - Cplx{0, h});
  const Cplx px = (fxp - fxm) / (2 * h);
  const Cplx py = (fyp - fym) / (2 * h);
  const Cplx fd_dz = (px - Cplx{0, 1} * py) / 2.0;
  const Cplx fd_dzbar = (px + Cplx{0, 1} * py) / 2.0;
  const Cplx sym_dz = eval(dz(f), z);
  const Cplx sym_dzbar = eval(dzbar(f), z);
  return {std::abs(fd_dz - sym_dz) / std::max(1.0, std::abs(sym_dz)),
          std::abs(fd_dzbar - sym_dzbar) / std::max(1.0, std::abs(sym_dzbar))};
}

}  // namespace cyclint::wirt
