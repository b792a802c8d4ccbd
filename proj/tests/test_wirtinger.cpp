#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cyclint/wirtinger.hpp"

using namespace cyclint::wirt;
using doctest::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel(Cplx a, Cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

TermSum random_termsum(std::mt19937& rng, int weight, int natoms = 1) {
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  TermSum f = TermSum::zero(weight);
  for (int i = 0; i < natoms; ++i)
    f.atoms.push_back({{U(rng), U(rng)},
                       U(rng) + 2.5,
                       {U(rng), U(rng)},
                       {U(rng), U(rng)}});
  return f;
}

Cplx random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> X(-0.5, 0.5), Y(0.8, 2.2);
  return {X(rng), Y(rng)};
}

}  // namespace

TEST_CASE("eval basics") {
  CHECK(eval(TermSum::single(1.0, 2, {0, 0}, {0, 0}, 0), {0, 1}).real() == Approx(1.0));
  CHECK(eval(TermSum::single(1.0, 0, {0, 2 * kPi}, {0, 0}, 0), {0, 1}).real() ==
        Approx(std::exp(-2 * kPi)).epsilon(1e-12));
  CHECK(eval(TermSum::single(1.0, 1, {0, 0}, {0, 0}, 0), {0, 2}).real() == Approx(2.0));
  CHECK_THROWS_AS(eval(TermSum::constant(1.0, 0), {0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("normalize merges keys and kills cancellation residue") {
  TermSum f = TermSum::zero(0);
  f.atoms.push_back({1.0, 2.0, {0, 1}, {0, 0}});
  f.atoms.push_back({2.0, 2.0, {0, 1}, {0, 0}});
  f.atoms.push_back({-3.0 + 1e-17, 2.0, {0, 1}, {0, 0}});
  f.atoms.push_back({1e-20, 5.0, {0, 0}, {0, 0}});  // honest small atom survives
  f = normalize(std::move(f));
  REQUIRE(f.size() == 1);
  CHECK(f.atoms[0].ypow == 5.0);
  CHECK(f.atoms[0].coeff == Cplx{1e-20, 0});
}

TEST_CASE("lower on pinned atoms") {
  // L(y^a) = a y^(a+1)
  auto r = lower(TermSum::single(1.0, 3, {0, 0}, {0, 0}, 0));
  REQUIRE(r.size() == 1);
  CHECK(r.atoms[0].coeff == Cplx{3, 0});
  CHECK(r.atoms[0].ypow == 4.0);
  CHECK(r.weight == -2);
  // holomorphic atoms die
  CHECK(lower(TermSum::single(1.0, 0, {0, 2 * kPi}, {0, 0}, 0)).empty());
  // L(-3/(pi y)) = 3/pi
  auto r2 = lower(TermSum::single(-3.0 / kPi, -1, {0, 0}, {0, 0}, 2));
  REQUIRE(r2.size() == 1);
  CHECK(r2.atoms[0].coeff.real() == Approx(3.0 / kPi));
  CHECK(r2.atoms[0].ypow == 0.0);
}

TEST_CASE("raise on pinned atoms") {
  // R_w(y^a) = (a+w) y^(a-1)
  auto r = raise(TermSum::single(1.0, 3, {0, 0}, {0, 0}, -2));
  REQUIRE(r.size() == 1);
  CHECK(r.atoms[0].coeff == Cplx{1, 0});
  CHECK(r.atoms[0].ypow == 2.0);
  CHECK(r.weight == 0);
  auto r2 = raise(TermSum::single(1.0, 1, {0, 0}, {0, 0}, 2));
  REQUIRE(r2.size() == 1);
  CHECK(r2.atoms[0].coeff == Cplx{3, 0});
  CHECK(r2.atoms[0].ypow == 0.0);
  auto r3 = raise(TermSum::single(1.0, 0, {0, 2 * kPi}, {0, 0}, 0));
  REQUIRE(r3.size() == 1);
  CHECK(r3.atoms[0].coeff.real() == Approx(-4 * kPi));
  CHECK(r3.atoms[0].coeff.imag() == Approx(0.0));
}

TEST_CASE("xi on pinned atoms") {
  // xi_{-2}(y^3) = 3 at weight 4
  auto r = xi(TermSum::single(1.0, 3, {0, 0}, {0, 0}, -2));
  REQUIRE(r.size() == 1);
  CHECK(r.atoms[0].coeff == Cplx{3, 0});
  CHECK(r.atoms[0].ypow == 0.0);
  CHECK(r.weight == 4);
  // xi_2 of the E2* correction term
  auto r2 = xi(TermSum::single(-3.0 / kPi, -1, {0, 0}, {0, 0}, 2));
  REQUIRE(r2.size() == 1);
  CHECK(r2.atoms[0].coeff.real() == Approx(3.0 / kPi));
  CHECK(r2.atoms[0].ypow == 0.0);
  CHECK(xi(TermSum::single(1.0, 0, {0, 2 * kPi}, {0, 0}, 0)).empty());
}

TEST_CASE("laplacian eigenvalues") {
  // Delta_0 y^s = s(1-s) y^s
  auto r = laplacian(TermSum::single(1.0, 1.5, {0, 0}, {0, 0}, 0));
  REQUIRE(r.size() == 1);
  CHECK(r.atoms[0].coeff.real() == Approx(-0.75).epsilon(1e-14));
  CHECK(r.atoms[0].ypow == Approx(1.5));
  // Delta_{-2} y^3 = 0 (k = 2 harmonic seed)
  CHECK(laplacian(TermSum::single(1.0, 3, {0, 0}, {0, 0}, -2)).empty());
  CHECK(laplacian(TermSum::constant(1.0, 0)).empty());
}

TEST_CASE("bol basics") {
  // D q^m = m q^m
  auto r = bol(TermSum::single(1.0, 0, {0, 2 * kPi * 3}, {0, 0}, 0), 1);
  REQUIRE(r.size() == 1);
  CHECK(r.atoms[0].coeff.real() == Approx(3.0).epsilon(1e-14));
  CHECK(r.atoms[0].coeff.imag() == Approx(0.0));
  CHECK(bol(TermSum::constant(1.0, 0), 1).empty());
  CHECK_THROWS_AS(bol(TermSum::constant(1.0, 0), -1), std::invalid_argument);
}

TEST_CASE("bol equals the raising chain in the Bol regime") {
  std::mt19937 rng(11);
  for (int it = 0; it < 30; ++it) {
    const int kappa = -1 - static_cast<int>(rng() % 3);  // weight 2 kappa <= -2
    const int n = 1 - 2 * kappa;
    TermSum f = random_termsum(rng, 2 * kappa, 2);
    TermSum lhs = bol(f, n);
    TermSum rhs = scale(iterate_raise(f, n), std::pow(-4 * kPi, 2 * kappa - 1));
    for (int p = 0; p < 5; ++p) {
      Cplx z = random_point(rng);
      CHECK(rel(eval(lhs, z), eval(rhs, z)) < 1e-10);
    }
  }
}

TEST_CASE("composition routes of the weight-shifted Laplacian agree") {
  std::mt19937 rng(23);
  for (int it = 0; it < 200; ++it) {
    const int w = 2 * (static_cast<int>(rng() % 11) - 5);  // even in [-10, 10]
    TermSum f = random_termsum(rng, w);
    TermSum a = laplacian(f);  // internally cross-checks -(LR + w) vs -RL
    TermSum routeB = scale(raise(lower(f)), -1.0);
    routeB.weight = w;
    Cplx z = random_point(rng);
    CHECK(rel(eval(a, z), eval(routeB, z)) < 1e-12);
  }
}

TEST_CASE("commutation of the Laplacian with iterated raising and lowering") {
  std::mt19937 rng(37);
  for (int it = 0; it < 40; ++it) {
    const int kappa = static_cast<int>(rng() % 9) - 4;
    TermSum f = random_termsum(rng, 2 * kappa);
    for (int n = 0; n <= 3; ++n) {
      {
        const int l = kappa + n;
        const double cst = (kappa - l) * (kappa + l - 1);
        TermSum lhs = laplacian(iterate_raise(f, n));
        TermSum rhs = iterate_raise(add(laplacian(f), scale(f, -cst)), n);
        for (int p = 0; p < 10; ++p) {
          Cplx z = random_point(rng);
          CHECK(rel(eval(lhs, z), eval(rhs, z)) < 1e-10);
        }
      }
      {
        const int l = kappa - n;
        const double cst = (kappa - l) * (kappa + l - 1);
        TermSum lhs = laplacian(iterate_lower(f, n));
        TermSum rhs = iterate_lower(add(laplacian(f), scale(f, -cst)), n);
        for (int p = 0; p < 10; ++p) {
          Cplx z = random_point(rng);
          CHECK(rel(eval(lhs, z), eval(rhs, z)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("xi is an antilinear involution up to the Laplacian") {
  std::mt19937 rng(41);
  for (int it = 0; it < 50; ++it) {
    const int w = 2 * (static_cast<int>(rng() % 7) - 3);
    TermSum f = random_termsum(rng, w, 2);
    TermSum xx = xi(xi(f));
    TermSum md = scale(laplacian(f), -1.0);
    for (int p = 0; p < 5; ++p) {
      Cplx z = random_point(rng);
      CHECK(rel(eval(xx, z), eval(md, z)) < 1e-10);
    }
    // antilinearity at the coefficient level
    const Cplx c{0.7, -1.3};
    TermSum a = xi(scale(f, c));
    TermSum b = scale(xi(f), std::conj(c));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      // multiplication order differs between the two routes; last-ulp slack
      CHECK(std::abs(a.atoms[i].coeff - b.atoms[i].coeff) <=
            1e-14 * std::abs(b.atoms[i].coeff));
      CHECK(a.atoms[i].ypow == b.atoms[i].ypow);
      CHECK(a.atoms[i].alpha == b.atoms[i].alpha);
      CHECK(a.atoms[i].beta == b.atoms[i].beta);
    }
  }
}

TEST_CASE("pointwise semantics of conjugate, multiply, scale") {
  // conj of (i, 1, 2 pi i, 0)
  auto c = conjugate(TermSum::single({0, 1}, 1, {0, 2 * kPi}, {0, 0}, 4));
  REQUIRE(c.size() == 1);
  CHECK(c.atoms[0].coeff == Cplx{0, -1});
  CHECK(c.atoms[0].alpha == Cplx{0, 0});
  CHECK(c.atoms[0].beta == Cplx{0, -2 * kPi});
  CHECK(c.weight == -4);

  auto m = multiply(TermSum::single(1.0, 2, {0, 0}, {0, 0}, 0),
                    TermSum::single(1.0, 3, {0, 0}, {0, 0}, 0));
  REQUIRE(m.size() == 1);
  CHECK(m.atoms[0].ypow == 5.0);

  std::mt19937 rng(53);
  for (int it = 0; it < 20; ++it) {
    TermSum f = random_termsum(rng, 0, 3);
    TermSum g = random_termsum(rng, 2, 2);
    Cplx z = random_point(rng);
    CHECK(rel(eval(conjugate(f), z), std::conj(eval(f, z))) < 1e-12);
    CHECK(rel(eval(multiply(f, g), z), eval(f, z) * eval(g, z)) < 1e-12);
    CHECK(rel(eval(scale(f, {2, -1}), z), Cplx{2, -1} * eval(f, z)) < 1e-12);
    CHECK(rel(eval(add(f, g), z), eval(f, z) + eval(g, z)) < 1e-12);
  }
}

TEST_CASE("finite differences confirm the symbolic derivatives") {
  {
    auto r = fd_check(TermSum::single(1.0, 2, {0, 0}, {0, 0}, 0), {0, 1}, 1e-5);
    CHECK(r.dz_res < 1e-7);
    CHECK(r.dzbar_res < 1e-7);
  }
  {
    auto r = fd_check(TermSum::single(1.0, 0, {0, 2 * kPi}, {0, 0}, 0), {0.2, 1.0},
                      1e-5);
    CHECK(r.dzbar_res < 1e-9);
  }
  {
    auto r = fd_check(TermSum::single(1.0, 1.5, {0, 2 * kPi}, {0, -4 * kPi}, 0),
                      {0.3, 1.2}, 1e-6);
    CHECK(r.dz_res < 1e-7);
    CHECK(r.dzbar_res < 1e-7);
  }
  std::mt19937 rng(67);
  for (int it = 0; it < 50; ++it) {
    TermSum f = random_termsum(rng, 0, 2);
    auto r = fd_check(f, random_point(rng), 1e-6);
    CHECK(r.dz_res < 1e-7);
    CHECK(r.dzbar_res < 1e-7);
  }
  CHECK_THROWS_AS(fd_check(TermSum::constant(1.0, 0), {0.0, 1e-7}, 1e-5),
                  std::invalid_argument);
}

TEST_CASE("lowering and raising against finite differences") {
  // L = -2i y^2 dzbar and R_w = 2i dz + w/y, reconstructed numerically
  std::mt19937 rng(71);
  for (int it = 0; it < 30; ++it) {
    const int w = 2 * (static_cast<int>(rng() % 7) - 3);
    TermSum f = random_termsum(rng, w, 2);
    const Cplx z = random_point(rng);
    const double y = z.imag(), h = 1e-6;
    const Cplx px = (eval(f, z + h) - eval(f, z - h)) / (2 * h);
    const Cplx py = (eval(f, z + Cplx{0, h}) - eval(f, z - Cplx{0, h})) / (2 * h);
    const Cplx fd_dz = (px - Cplx{0, 1} * py) / 2.0;
    const Cplx fd_dzbar = (px + Cplx{0, 1} * py) / 2.0;
    CHECK(rel(eval(lower(f), z), Cplx{0, -2} * y * y * fd_dzbar) < 1e-7);
    CHECK(rel(eval(raise(f), z), Cplx{0, 2} * fd_dz + double(w) / y * eval(f, z)) <
          1e-7);
    CHECK(rel(eval(xi(f), z),
              Cplx{0, 2} * std::pow(y, w) * std::conj(fd_dzbar)) < 1e-7);
  }
}
