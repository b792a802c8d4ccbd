#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cyclint/bqf.hpp"
#include "cyclint/cycle.hpp"
#include "cyclint/forms.hpp"
#include "cyclint/verify.hpp"

namespace {

using namespace cyclint;

constexpr int kExitPass = 0;
constexpr int kExitIdentityFail = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumeric = 3;

bool parse_form(const std::string& s, bqf::QuadForm& q) {
  long long a, b, c;
  char extra;
  if (std::sscanf(s.c_str(), "%lld,%lld,%lld%c", &a, &b, &c, &extra) != 3)
    return false;
  q = {a, b, c};
  return true;
}

struct IntegralArgs {
  std::string form;
  long long D = 0;
  std::string family = "const";
  std::string ops;  // comma separated: L,R,xi,laplacian,bol<n>
  double s = 1.5;
  int k = 2;
  int M = 24;
  int N = 200;
  double quad_tol = 1e-9;
};

int build_family(const IntegralArgs& a, forms::ModularObject& f) {
  if (a.family == "const") {
    f = forms::from_termsum(wirt::TermSum::constant({1, 0}, 0), forms::Cplx{0, 0},
                            "const");
  } else if (a.family == "productE4E6") {
    f = forms::product_form(forms::standard_qexp(forms::StandardForm::E4, a.M),
                            forms::standard_qexp(forms::StandardForm::E6, a.M), 6);
    f.label = "productE4E6";
  } else if (a.family == "e2star") {
    f = forms::e2_completion(a.M);
  } else if (a.family == "eis-s") {
    if (a.s <= 1.0) {
      std::cerr << "error: eis-s requires s > 1 (got " << a.s << ")\n";
      return kExitInvalidInput;
    }
    f = forms::eisenstein_real_analytic(a.s, a.N);
  } else if (a.family == "eis-harmonic") {
    if (a.k < 2) {
      std::cerr << "error: eis-harmonic requires k >= 2\n";
      return kExitInvalidInput;
    }
    f = forms::eisenstein_harmonic(a.k, a.N);
  } else {
    std::cerr << "error: unknown family '" << a.family << "'\n";
    return kExitInvalidInput;
  }
  return kExitPass;
}

int apply_ops(const std::string& ops, forms::ModularObject& f) {
  std::stringstream ss(ops);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok == "none") continue;
    if (tok == "L")
      f = forms::apply_operator(f, forms::Op::L);
    else if (tok == "R")
      f = forms::apply_operator(f, forms::Op::R);
    else if (tok == "xi")
      f = forms::apply_operator(f, forms::Op::Xi);
    else if (tok == "laplacian")
      f = forms::apply_operator(f, forms::Op::Laplacian);
    else if (tok.rfind("bol", 0) == 0) {
      int n = 1;
      if (tok.size() > 3) n = std::stoi(tok.substr(3));
      f = forms::apply_bol(f, n);
    } else {
      std::cerr << "error: unknown operator '" << tok << "'\n";
      return kExitInvalidInput;
    }
  }
  return kExitPass;
}

int cmd_integral(const IntegralArgs& a) {
  bqf::QuadForm q;
  if (!a.form.empty()) {
    if (!parse_form(a.form, q)) {
      std::cerr << "error: cannot parse form '" << a.form << "'\n";
      return kExitInvalidInput;
    }
  } else if (a.D != 0) {
    if (a.D <= 0 || bqf::is_perfect_square(a.D) || (a.D % 4 != 0 && a.D % 4 != 1)) {
      std::cerr << "error: invalid discriminant " << a.D << "\n";
      return kExitInvalidInput;
    }
    q = bqf::enumerate_classes(a.D).front();
  } else {
    std::cerr << "error: need --form or --D\n";
    return kExitInvalidInput;
  }
  const long long D = bqf::discriminant(q);
  if (D <= 0) {
    std::cerr << "error: discriminant " << D << " is not positive\n";
    return kExitInvalidInput;
  }
  if (bqf::is_perfect_square(D)) {
    std::cerr << "error: square discriminant " << D << "\n";
    return kExitInvalidInput;
  }

  forms::ModularObject f;
  if (int rc = build_family(a, f); rc != kExitPass) return rc;
  if (int rc = apply_ops(a.ops, f); rc != kExitPass) return rc;

  try {
    const auto res = cycle::cycle_integral(f, q, a.quad_tol);
    std::printf("C(F,Q) = %.12g %+.12gi\n", res.value.real(), res.value.imag());
    std::printf("abs_error <= %.3g   panels = %d   eps^2 = %.12g\n", res.abs_error,
                res.panels, res.eps_sq);
  } catch (const cycle::QuadratureFailure& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitPass;
}

struct VerifyArgs {
  std::string suite = "default";
  std::string out;
  std::string meta_out;
  std::string format = "json";
  double tol = 0;  // 0 = per-family defaults
  double quad_tol = 1e-9;
  int M = 24;
  int N = 400;
  int threads = 1;
  std::string discs = "5,8,13";
};

int cmd_verify(const VerifyArgs& a) {
  verify::SuiteConfig cfg;
  cfg.suite = a.suite;
  cfg.quad_tol = a.quad_tol;
  cfg.qexp_M = a.M;
  cfg.lattice_N = a.N;
  cfg.threads = a.threads;
  if (a.tol > 0) {
    cfg.tol_termsum = a.tol;
    cfg.tol_lattice = a.tol;
  }
  cfg.thm_discs.clear();
  {
    std::stringstream ss(a.discs);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) cfg.thm_discs.push_back(std::stoll(tok));
  }

  std::vector<verify::IdentityReport> reports;
  try {
    reports = verify::run_suite(cfg);
  } catch (const cycle::QuadratureFailure& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  const std::string payload = a.format == "csv" ? verify::reports_to_csv(reports)
                                                : verify::reports_to_json(reports);
  if (!a.out.empty()) {
    std::ofstream os(a.out, std::ios::binary);
    os << payload;
  } else {
    std::cout << payload;
  }
  if (!a.meta_out.empty()) {
    std::ofstream os(a.meta_out, std::ios::binary);
    os << verify::reports_metadata_json(reports);
  }
  for (const auto& r : reports)
    std::fprintf(stderr, "%-24s %-12s D=%-4lld rel=%.3g %s\n", r.identity.c_str(),
                 r.family.c_str(), r.D, r.rel_residual, r.pass ? "PASS" : "FAIL");
  if (verify::any_input_error(reports)) return kExitInvalidInput;
  return verify::all_pass(reports) ? kExitPass : kExitIdentityFail;
}

int cmd_classes(long long D) {
  if (D <= 0 || bqf::is_perfect_square(D)) {
    std::cerr << "error: square or non-positive discriminant " << D << "\n";
    return kExitInvalidInput;
  }
  if (D % 4 != 0 && D % 4 != 1) {
    std::cerr << "error: " << D << " is not a discriminant (mod 4)\n";
    return kExitInvalidInput;
  }
  const auto reps = bqf::enumerate_classes(D);
  std::printf("D = %lld: %zu class(es)\n", D, reps.size());
  for (const auto& q : reps) {
    const auto fr = bqf::frame(q);
    std::printf("  %-14s eps = %.12g   length 2*log(eps) = %.12g\n",
                q.str().c_str(), fr.eps, 2.0 * std::log(fr.eps));
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle integrals of non-holomorphic modular forms"};
  app.require_subcommand(1);
  app.set_config("--config");

  IntegralArgs ia;
  auto* integral = app.add_subcommand("integral", "compute one cycle integral");
  integral->add_option("--form", ia.form, "quadratic form a,b,c");
  integral->add_option("--D", ia.D, "discriminant (first class representative)");
  integral->add_option("--family", ia.family,
                       "const|productE4E6|e2star|eis-s|eis-harmonic");
  integral->add_option("--op", ia.ops, "operators, comma separated (L,R,xi,laplacian,bol<n>)");
  integral->add_option("--s", ia.s, "parameter s for eis-s");
  integral->add_option("--k", ia.k, "parameter k for eis-harmonic");
  integral->add_option("--M", ia.M, "q-expansion truncation");
  integral->add_option("--N", ia.N, "lattice truncation");
  integral->add_option("--quad-tol", ia.quad_tol, "quadrature tolerance");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run an identity suite");
  ver->add_option("--suite", va.suite, "suite name ('' for empty)");
  ver->add_option("--out", va.out, "report output path");
  ver->add_option("--meta-out", va.meta_out, "metadata (wall time) output path");
  ver->add_option("--format", va.format, "json|csv");
  ver->add_option("--tol", va.tol, "override identity tolerance");
  ver->add_option("--quad-tol", va.quad_tol, "quadrature tolerance");
  ver->add_option("--M", va.M, "q-expansion truncation");
  ver->add_option("--N", va.N, "lattice truncation");
  ver->add_option("--threads", va.threads, "parallel report jobs");
  ver->add_option("--discs", va.discs, "theorem-suite discriminants");

  long long classes_D = 0;
  auto* cls = app.add_subcommand("classes", "list form classes of a discriminant");
  cls->add_option("--D", classes_D, "discriminant")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidInput;
  }

  try {
    if (integral->parsed()) return cmd_integral(ia);
    if (ver->parsed()) return cmd_verify(va);
    if (cls->parsed()) return cmd_classes(classes_D);
  } catch (const cycle::QuadratureFailure& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
