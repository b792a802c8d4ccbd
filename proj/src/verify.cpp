#include "cyclint/verify.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace cyclint::verify {

namespace {

using Clock = std::chrono::steady_clock;

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::string form_str(const bqf::QuadForm& q) {
  return std::to_string(q.a) + "," + std::to_string(q.b) + "," + std::to_string(q.c);
}

forms::ModularObject iterate(forms::ModularObject f, forms::Op op, int n) {
  for (int i = 0; i < n; ++i) f = forms::apply_operator(f, op);
  return f;
}

}  // namespace

double rel_residual(Cplx lhs, Cplx rhs) {
  return std::abs(lhs - rhs) /
         std::max({std::abs(lhs), std::abs(rhs), 1e-30});
}

IdentityReport make_report(std::string identity, std::string family,
                           const bqf::QuadForm& q, Cplx lhs, Cplx rhs,
                           double tol) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.family = std::move(family);
  r.form = form_str(q);
  r.D = bqf::discriminant(q);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual = rel_residual(lhs, rhs);
  r.tol = tol;
  r.pass = r.rel_residual <= tol;
  return r;
}

bool is_harmonic_numeric(const forms::ModularObject& f, double tol) {
  const auto lap = forms::apply_operator(f, forms::Op::Laplacian);
  const Cplx pts[5] = {{0.0, 1.0}, {0.3, 1.2}, {-0.4, 0.9}, {0.13, 2.0}, {-0.2, 1.5}};
  for (Cplx z : pts) {
    auto [zr, g] = forms::fd_reduce(z);
    const double num = std::abs(forms::eval_raw(lap, zr));
    const double den = std::max(1.0, std::abs(forms::eval_raw(f, zr)));
    if (num / den > tol) return false;
  }
  return true;
}

std::vector<IdentityReport> check_first_identity(const forms::ModularObject& f,
                                                 const bqf::QuadForm& q,
                                                 double quad_tol, double tol) {
  const auto lf = forms::apply_operator(f, forms::Op::L);
  const auto rf = forms::apply_operator(f, forms::Op::R);
  const auto xf = forms::apply_operator(f, forms::Op::Xi);
  const Cplx cl = cycle::cycle_integral(lf, q, quad_tol).value;
  const Cplx cr = cycle::cycle_integral(rf, q, quad_tol).value;
  const Cplx cx = std::conj(cycle::cycle_integral(xf, q, quad_tol).value);
  return {make_report("thm_L_eq_R", f.label, q, cl, cr, tol),
          make_report("thm_R_eq_xibar", f.label, q, cr, cx, tol),
          make_report("thm_L_eq_xibar", f.label, q, cl, cx, tol)};
}

IdentityReport check_recursion(const forms::ModularObject& f, const bqf::QuadForm& q,
                               int ell, Side side, double quad_tol, double tol) {
  if (!f.eigenvalue)
    throw std::invalid_argument("check_recursion: eigenvalue metadata missing");
  if ((2 - f.weight) % 2 != 0)
    throw std::invalid_argument("check_recursion: weight must be even");
  const int k = (2 - f.weight) / 2;
  const Cplx lambda = *f.eigenvalue;
  const Cplx constant =
      static_cast<double>((k + ell) * (k - ell - 1)) - lambda;
  if (side == Side::R) {
    if (ell > k - 2)
      throw std::invalid_argument("check_recursion: need l <= k-2 on the R side");
    const Cplx lhs = cycle::cycle_integral(iterate(f, forms::Op::R, k - ell), q,
                                           quad_tol).value;
    const Cplx base = cycle::cycle_integral(iterate(f, forms::Op::R, k - ell - 2),
                                            q, quad_tol).value;
    return make_report("recursion_R_l=" + std::to_string(ell), f.label, q, lhs,
                       constant * base, tol);
  }
  if (ell > -k)
    throw std::invalid_argument("check_recursion: need l <= -k on the L side");
  const Cplx lhs = cycle::cycle_integral(iterate(f, forms::Op::L, -k - ell + 2), q,
                                         quad_tol).value;
  const Cplx base = cycle::cycle_integral(iterate(f, forms::Op::L, -k - ell), q,
                                          quad_tol).value;
  return make_report("recursion_L_l=" + std::to_string(ell), f.label, q, lhs,
                     constant * base, tol);
}

IdentityReport check_corollary(const forms::ModularObject& f, const bqf::QuadForm& q,
                               int j, double quad_tol, double tol) {
  if (!is_harmonic_numeric(f))
    throw std::invalid_argument("check_corollary: F is not harmonic");
  const int k = (2 - f.weight) / 2;
  const Cplx cxi =
      std::conj(cycle::cycle_integral(forms::apply_operator(f, forms::Op::Xi), q,
                                      quad_tol).value);
  if (k >= 1) {
    if (j < 1 || j > k)
      throw std::invalid_argument("check_corollary: need 1 <= j <= k");
    const double c = factorial(j - 1) * factorial(k - j) * factorial(2 * k - 2) /
                     (factorial(k - 1) * factorial(2 * k - 2 * j));
    const Cplx lhs = cycle::cycle_integral(iterate(f, forms::Op::R, 2 * j - 1), q,
                                           quad_tol).value;
    return make_report("corollary_R_j=" + std::to_string(j), f.label, q, lhs,
                       c * cxi, tol);
  }
  const int ak = -k;
  if (j < 0 || j > ak)
    throw std::invalid_argument("check_corollary: need 0 <= j <= |k|");
  const double c = factorial(2 * j) * factorial(ak) /
                   (factorial(j) * factorial(ak - j));
  const Cplx lhs = cycle::cycle_integral(iterate(f, forms::Op::L, 2 * j + 1), q,
                                         quad_tol).value;
  return make_report("corollary_L_j=" + std::to_string(j), f.label, q, lhs,
                     c * cxi, tol);
}

IdentityReport check_bgk(const forms::ModularObject& f, const bqf::QuadForm& q,
                         double quad_tol, double tol) {
  if (!is_harmonic_numeric(f))
    throw std::invalid_argument("check_bgk: F is not harmonic");
  const int k = (2 - f.weight) / 2;
  if (k < 1) throw std::invalid_argument("check_bgk: need k >= 1");
  const Cplx lhs =
      cycle::cycle_integral(forms::apply_bol(f, 2 * k - 1), q, quad_tol).value;
  const Cplx cxi =
      std::conj(cycle::cycle_integral(forms::apply_operator(f, forms::Op::Xi), q,
                                      quad_tol).value);
  const double c = -factorial(2 * k - 2) / std::pow(4.0 * M_PI, 2 * k - 1);
  return make_report("bgk_bol", f.label, q, lhs, c * cxi, tol);
}

std::vector<IdentityReport> run_suite(const SuiteConfig& cfg) {
  if (cfg.suite.empty()) return {};
  if (cfg.suite != "default")
    throw std::invalid_argument("run_suite: unknown suite '" + cfg.suite + "'");

  // Each job appends a fixed number of reports at a fixed slot.
  std::vector<std::function<std::vector<IdentityReport>()>> jobs;

  std::vector<long long> bad_discs;
  std::vector<bqf::QuadForm> thm_forms;
  for (long long D : cfg.thm_discs) {
    if (D <= 0 || bqf::is_perfect_square(D) || (D % 4 != 0 && D % 4 != 1)) {
      bad_discs.push_back(D);
      continue;
    }
    thm_forms.push_back(bqf::enumerate_classes(D).front());
  }

  const auto e4 = forms::standard_qexp(forms::StandardForm::E4, cfg.qexp_M);
  const auto e6 = forms::standard_qexp(forms::StandardForm::E6, cfg.qexp_M);

  for (const auto& q : thm_forms) {
    jobs.emplace_back([=, &cfg]() {
      auto fam_a = forms::product_form(e4, e6, 6);
      fam_a.label = "productE4E6";
      return check_first_identity(fam_a, q, cfg.quad_tol, cfg.tol_termsum);
    });
  }
  {
    bqf::QuadForm q{1, 0, -2};
    jobs.emplace_back([=, &cfg]() {
      auto e2s = forms::e2_completion(cfg.qexp_M);
      return check_first_identity(e2s, q, cfg.quad_tol, cfg.tol_termsum);
    });
  }
  {
    bqf::QuadForm q{1, 1, -1};
    jobs.emplace_back([&cfg, q]() {
      auto es = forms::eisenstein_real_analytic(1.5, cfg.lattice_N);
      return std::vector<IdentityReport>{
          check_recursion(es, q, -1, Side::R, cfg.quad_tol, cfg.tol_lattice)};
    });
    jobs.emplace_back([&cfg, q]() {
      auto es = forms::eisenstein_real_analytic(1.5, cfg.lattice_N);
      return std::vector<IdentityReport>{
          check_recursion(es, q, -1, Side::L, cfg.quad_tol, cfg.tol_lattice)};
    });
    jobs.emplace_back([&cfg, q]() {
      auto eh = forms::eisenstein_harmonic(2, cfg.lattice_N);
      eh.label = "E_-2";
      return std::vector<IdentityReport>{
          check_corollary(eh, q, 2, cfg.quad_tol, cfg.tol_lattice)};
    });
    jobs.emplace_back([&cfg, q]() {
      auto eh = forms::eisenstein_harmonic(2, cfg.lattice_N);
      eh.label = "E_-2";
      return std::vector<IdentityReport>{
          check_bgk(eh, q, cfg.quad_tol, cfg.tol_lattice)};
    });
  }

  std::vector<std::vector<IdentityReport>> slots(jobs.size());
  auto run_job = [&](std::size_t i) {
    const auto t0 = Clock::now();
    slots[i] = jobs[i]();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    for (auto& r : slots[i]) r.wall_time = dt / slots[i].size();
  };

  const int workers = std::max(1, cfg.threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          run_job(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  std::vector<IdentityReport> reports;
  for (long long D : bad_discs) {
    IdentityReport r;
    r.identity = "input_error";
    r.family = "config";
    r.form = "";
    r.D = D;
    r.tol = cfg.tol_termsum;
    r.pass = false;
    reports.push_back(r);
  }
  for (auto& s : slots)
    for (auto& r : s) reports.push_back(std::move(r));
  return reports;
}

bool all_pass(const std::vector<IdentityReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass) return false;
  return true;
}

bool any_input_error(const std::vector<IdentityReport>& reports) {
  for (const auto& r : reports)
    if (r.identity == "input_error") return true;
  return false;
}

std::string reports_to_json(const std::vector<IdentityReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json row;
    row["identity"] = r.identity;
    row["family"] = r.family;
    row["form"] = r.form;
    row["D"] = r.D;
    row["lhs_re"] = r.lhs.real();
    row["lhs_im"] = r.lhs.imag();
    row["rhs_re"] = r.rhs.real();
    row["rhs_im"] = r.rhs.imag();
    row["abs_residual"] = r.abs_residual;
    row["rel_residual"] = r.rel_residual;
    row["tol"] = r.tol;
    row["pass"] = r.pass;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<IdentityReport>& reports) {
  std::string out =
      "identity,family,form,D,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,"
      "rel_residual,tol,pass\n";
  char buf[512];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf,
                  "%s,%s,\"%s\",%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                  r.identity.c_str(), r.family.c_str(), r.form.c_str(), r.D,
                  r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(),
                  r.abs_residual, r.rel_residual, r.tol, r.pass ? "true" : "false");
    out += buf;
  }
  return out;
}

std::string reports_metadata_json(const std::vector<IdentityReport>& reports) {
  double total = 0;
  for (const auto& r : reports) total += r.wall_time;
  nlohmann::ordered_json meta;
  meta["report_count"] = reports.size();
  meta["wall_time_total_s"] = total;
  nlohmann::ordered_json times = nlohmann::ordered_json::array();
  for (const auto& r : reports) times.push_back(r.wall_time);
  meta["wall_time_s"] = std::move(times);
  return meta.dump(2) + "\n";
}

}  // namespace cyclint::verify
