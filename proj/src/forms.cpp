#include "cyclint/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace cyclint::forms {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

struct Coset {
  int c, d;   // bottom row, one representative per +-pair
  int a, b;   // lift with a*d - b*c = 1
};

// Extended gcd lift: given coprime (c, d), find (a, b) with a d - b c = 1.
std::pair<int, int> lift_row(int c, int d) {
  // solve a*d + b'*c = 1 with b = -b'
  long long old_r = d, r = c, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long long q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  // old_r = gcd = +-1; old_s * d + old_t * c = old_r
  if (old_r < 0) {
    old_s = -old_s;
    old_t = -old_t;
  }
  return {static_cast<int>(old_s), static_cast<int>(-old_t)};
}

std::shared_ptr<const std::vector<Coset>> coset_table(int N) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const std::vector<Coset>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;

  auto table = std::make_shared<std::vector<Coset>>();
  table->push_back({0, 1, 1, 0});
  for (int c = 1; c <= N; ++c)
    for (int d = -N; d <= N; ++d) {
      if (std::gcd(c, std::abs(d)) != 1) continue;
      auto [a, b] = lift_row(c, d);
      table->push_back({c, d, a, b});
    }
  std::sort(table->begin(), table->end(), [](const Coset& x, const Coset& y) {
    int sx = std::abs(x.c) + std::abs(x.d), sy = std::abs(y.c) + std::abs(y.d);
    if (sx != sy) return sx < sy;
    if (x.c != y.c) return x.c < y.c;
    return x.d < y.d;
  });
  cache[N] = table;
  return table;
}

Cplx eval_seed(const wirt::TermSum& seed, Cplx z) {
  const double y = z.imag();
  const Cplx zb = std::conj(z);
  Cplx s{0, 0};
  for (const auto& a : seed.atoms) {
    Cplx t = a.coeff;
    if (a.ypow != 0.0) t *= std::pow(y, a.ypow);
    if (a.alpha != Cplx{0, 0} || a.beta != Cplx{0, 0})
      t *= std::exp(a.alpha * z + a.beta * zb);
    s += t;
  }
  return s;
}

Cplx eval_eisenstein(const Eisenstein& e, Cplx z) {
  auto table = coset_table(e.trunc_N);
  const int half = e.trunc_N / 2;
  // Kahan-compensated, fixed deterministic order; the half-size truncation is
  // accumulated alongside for Richardson extrapolation of the smooth tail.
  Cplx sum{0, 0}, comp{0, 0}, sum_h{0, 0}, comp_h{0, 0};
  for (const Coset& co : *table) {
    const Cplx j = static_cast<double>(co.c) * z + static_cast<double>(co.d);
    const Cplx zg = (static_cast<double>(co.a) * z + static_cast<double>(co.b)) / j;
    const Cplx term = ipow(j, -e.weight) * eval_seed(e.seed, zg);
    const Cplx t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    if (co.c <= half && std::abs(co.d) <= half) {
      const Cplx th = sum_h + term;
      if (std::abs(sum_h) >= std::abs(term))
        comp_h += (sum_h - th) + term;
      else
        comp_h += (term - th) + sum_h;
      sum_h = th;
    }
  }
  const Cplx s_full = sum + comp;
  // The truncation tail is a smooth a(z) * N^(2-e) to leading order; one
  // Richardson step in that power removes it.
  const double p = e.conv_exponent() - 2.0;
  if (half < 8 || p <= 0.0 || p > 40.0) return s_full;
  const double f = std::pow(2.0, -p);
  return (s_full - f * (sum_h + comp_h)) / (1.0 - f);
}

}  // namespace

Cplx ipow(Cplx z, int n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  Cplx r{1, 0};
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

std::vector<long long> divisor_sigma(int k, int M) {
  std::vector<long long> s(M + 1, 0);
  for (int d = 1; d <= M; ++d) {
    long long dk = 1;
    for (int i = 0; i < k; ++i) dk *= d;
    for (int n = d; n <= M; n += d) s[n] += dk;
  }
  return s;
}

QExpansion standard_qexp(StandardForm name, int M) {
  if (M < 1) throw std::invalid_argument("standard_qexp: M >= 1 required");
  QExpansion f;
  switch (name) {
    case StandardForm::E2: {
      f.weight = 2;
      auto s = divisor_sigma(1, M);
      f.coeffs.assign(M + 1, {0, 0});
      f.coeffs[0] = 1;
      for (int n = 1; n <= M; ++n) f.coeffs[n] = -24.0 * s[n];
      break;
    }
    case StandardForm::E4: {
      f.weight = 4;
      auto s = divisor_sigma(3, M);
      f.coeffs.assign(M + 1, {0, 0});
      f.coeffs[0] = 1;
      for (int n = 1; n <= M; ++n) f.coeffs[n] = 240.0 * s[n];
      break;
    }
    case StandardForm::E6: {
      f.weight = 6;
      auto s = divisor_sigma(5, M);
      f.coeffs.assign(M + 1, {0, 0});
      f.coeffs[0] = 1;
      for (int n = 1; n <= M; ++n) f.coeffs[n] = -504.0 * s[n];
      break;
    }
    case StandardForm::Delta: {
      f.weight = 12;
      // q * prod (1 - q^n)^24, truncated at q^M
      std::vector<double> p(M, 0.0);
      p[0] = 1.0;
      for (int n = 1; n < M; ++n)
        for (int rep = 0; rep < 24; ++rep)
          for (int i = M - 1 - n; i >= 0; --i) p[i + n] -= p[i];
      f.coeffs.assign(M + 1, {0, 0});
      for (int i = 0; i < M; ++i) f.coeffs[i + 1] = p[i];
      break;
    }
  }
  return f;
}

QExpansion standard_qexp(const std::string& name, int M) {
  if (name == "E2") return standard_qexp(StandardForm::E2, M);
  if (name == "E4") return standard_qexp(StandardForm::E4, M);
  if (name == "E6") return standard_qexp(StandardForm::E6, M);
  if (name == "Delta") return standard_qexp(StandardForm::Delta, M);
  throw std::invalid_argument("standard_qexp: unknown form " + name);
}

Cplx eval_qexp(const QExpansion& f, Cplx z) {
  const Cplx q = std::exp(Cplx{0, kTwoPi} * z);
  Cplx s{0, 0};
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) s = s * q + *it;
  return s;
}

wirt::TermSum qexp_to_termsum(const QExpansion& f) {
  wirt::TermSum t = wirt::TermSum::zero(f.weight);
  for (int n = 0; n < static_cast<int>(f.coeffs.size()); ++n)
    if (f.coeffs[n] != Cplx{0, 0})
      t.atoms.push_back({f.coeffs[n], 0.0, Cplx{0, kTwoPi * n}, Cplx{0, 0}});
  return wirt::normalize(std::move(t));
}

double Eisenstein::conv_exponent() const {
  double e = 1e300;
  for (const auto& a : seed.atoms)
    e = std::min(e, 2.0 * a.ypow + weight);
  return seed.atoms.empty() ? 1e300 : e;
}

ModularObject from_termsum(wirt::TermSum f, std::optional<Cplx> eigenvalue,
                           std::string label) {
  int w = f.weight;
  return {std::move(f), w, eigenvalue, std::move(label)};
}

ModularObject from_qexp(QExpansion f, std::string label) {
  int w = f.weight;
  return {std::move(f), w, std::nullopt, std::move(label)};
}

ModularObject product_form(const QExpansion& g, const QExpansion& h, int j) {
  if (j != h.weight)
    throw std::invalid_argument("product_form: j must equal weight(h)");
  wirt::TermSum t = wirt::TermSum::zero(g.weight - h.weight);
  for (int m = 0; m < static_cast<int>(g.coeffs.size()); ++m)
    for (int n = 0; n < static_cast<int>(h.coeffs.size()); ++n) {
      Cplx c = g.coeffs[m] * std::conj(h.coeffs[n]);
      if (c == Cplx{0, 0}) continue;
      t.atoms.push_back({c, static_cast<double>(j), Cplx{0, kTwoPi * m},
                         Cplx{0, -kTwoPi * n}});
    }
  t = wirt::normalize(std::move(t));
  int w = t.weight;
  return {std::move(t), w, std::nullopt, "product"};
}

ModularObject eisenstein(wirt::TermSum seed, int N, std::optional<Cplx> eigenvalue,
                         std::string label) {
  Eisenstein e{std::move(seed), 0, N};
  e.weight = e.seed.weight;
  if (e.conv_exponent() <= 2.0)
    throw std::invalid_argument("eisenstein: divergent parameters (exponent <= 2)");
  int w = e.weight;
  return {std::move(e), w, eigenvalue, std::move(label)};
}

ModularObject eisenstein_real_analytic(double s, int N) {
  if (s <= 1.0)
    throw std::invalid_argument("eisenstein_real_analytic: need s > 1");
  auto seed = wirt::TermSum::single({1, 0}, s, {0, 0}, {0, 0}, 0);
  return eisenstein(std::move(seed), N, Cplx{s * (1.0 - s), 0}, "E(z,s)");
}

ModularObject eisenstein_harmonic(int k, int N) {
  if (k < 2) throw std::invalid_argument("eisenstein_harmonic: need k >= 2");
  auto seed = wirt::TermSum::single({1, 0}, 2.0 * k - 1.0, {0, 0}, {0, 0}, 2 - 2 * k);
  return eisenstein(std::move(seed), N, Cplx{0, 0}, "E_harm");
}

ModularObject e2_completion(int M) {
  auto e2 = standard_qexp(StandardForm::E2, M);
  wirt::TermSum t = qexp_to_termsum(e2);
  t.atoms.push_back({Cplx{-3.0 / M_PI, 0}, -1.0, {0, 0}, {0, 0}});
  t = wirt::normalize(std::move(t));
  t.weight = 2;
  return {std::move(t), 2, Cplx{0, 0}, "E2*"};
}

namespace {

std::optional<Cplx> next_eigenvalue(const ModularObject& f, Op op) {
  if (!f.eigenvalue) return std::nullopt;
  const double w = f.weight;
  switch (op) {
    case Op::L: return *f.eigenvalue - w + 2.0;
    case Op::R: return *f.eigenvalue + w;
    case Op::Xi: return std::conj(*f.eigenvalue);
    case Op::Laplacian: return *f.eigenvalue;
  }
  return std::nullopt;
}

wirt::TermSum apply_to_termsum(const wirt::TermSum& t, Op op) {
  switch (op) {
    case Op::L: return wirt::lower(t);
    case Op::R: return wirt::raise(t);
    case Op::Xi: return wirt::xi(t);
    case Op::Laplacian: return wirt::laplacian(t);
  }
  throw std::logic_error("apply_to_termsum: bad op");
}

}  // namespace

ModularObject apply_operator(const ModularObject& f, Op op) {
  ModularObject out;
  out.eigenvalue = next_eigenvalue(f, op);
  out.label = f.label;
  if (const auto* e = std::get_if<Eisenstein>(&f.rep)) {
    // Operators commute with the slash action: apply to the seed, re-sum.
    Eisenstein e2{apply_to_termsum(e->seed, op), 0, e->trunc_N};
    e2.weight = e2.seed.weight;
    out.weight = e2.weight;
    out.rep = std::move(e2);
    return out;
  }
  wirt::TermSum t = std::holds_alternative<QExpansion>(f.rep)
                        ? qexp_to_termsum(std::get<QExpansion>(f.rep))
                        : std::get<wirt::TermSum>(f.rep);
  t.weight = f.weight;
  wirt::TermSum r = apply_to_termsum(t, op);
  out.weight = r.weight;
  out.rep = std::move(r);
  return out;
}

ModularObject apply_bol(const ModularObject& f, int n) {
  ModularObject out;
  out.label = f.label;
  out.eigenvalue = (f.eigenvalue && *f.eigenvalue == Cplx{0, 0})
                       ? f.eigenvalue
                       : std::nullopt;
  if (const auto* e = std::get_if<Eisenstein>(&f.rep)) {
    Eisenstein e2{wirt::bol(e->seed, n), 0, e->trunc_N};
    e2.weight = e2.seed.weight;
    out.weight = e2.weight;
    out.rep = std::move(e2);
    return out;
  }
  wirt::TermSum t = std::holds_alternative<QExpansion>(f.rep)
                        ? qexp_to_termsum(std::get<QExpansion>(f.rep))
                        : std::get<wirt::TermSum>(f.rep);
  t.weight = f.weight;
  wirt::TermSum r = wirt::bol(t, n);
  out.weight = r.weight;
  out.rep = std::move(r);
  return out;
}

std::pair<Cplx, bqf::Mat2> fd_reduce(Cplx z) {
  if (z.imag() <= 0.0)
    throw std::invalid_argument("fd_reduce: z must be in the upper half-plane");
  bqf::Mat2 g = bqf::Mat2::identity();
  for (int iter = 0; iter < 10000; ++iter) {
    const long long n = std::llround(z.real());
    if (n != 0) {
      z -= static_cast<double>(n);
      g = bqf::Mat2::T(-n) * g;
    }
    if (std::norm(z) < 1.0 - 1e-15) {
      z = -1.0 / z;
      g = bqf::Mat2::S() * g;
    } else {
      return {z, g};
    }
  }
  throw std::runtime_error("fd_reduce: failed to converge (z too close to R)");
}

Cplx eval_raw(const ModularObject& f, Cplx z) {
  if (const auto* t = std::get_if<wirt::TermSum>(&f.rep)) return wirt::eval(*t, z);
  if (const auto* q = std::get_if<QExpansion>(&f.rep)) return eval_qexp(*q, z);
  return eval_eisenstein(std::get<Eisenstein>(f.rep), z);
}

Cplx eval_reduced(const ModularObject& f, Cplx z) {
  auto [zr, g] = fd_reduce(z);
  const Cplx j = static_cast<double>(g.m10) * z + static_cast<double>(g.m11);
  return ipow(j, -f.weight) * eval_raw(f, zr);
}

int choose_lattice_N(const Eisenstein& e, double tol, int start, int cap) {
  const Cplx probes[2] = {{0.0, 1.0}, {-0.23, 1.1}};
  int N = start;
  Eisenstein cur = e;
  cur.trunc_N = N;
  Cplx v0[2] = {eval_eisenstein(cur, probes[0]), eval_eisenstein(cur, probes[1])};
  while (2 * N <= cap) {
    cur.trunc_N = 2 * N;
    Cplx v1[2] = {eval_eisenstein(cur, probes[0]), eval_eisenstein(cur, probes[1])};
    double diff = std::max(std::abs(v1[0] - v0[0]), std::abs(v1[1] - v0[1]));
    N *= 2;
    v0[0] = v1[0];
    v0[1] = v1[1];
    if (diff < tol) break;
  }
  return N;
}

}  // namespace cyclint::forms
