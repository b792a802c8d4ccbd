#include "cyclint/bqf.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace cyclint::bqf {

std::string QuadForm::str() const {
  return "[" + std::to_string(a) + "," + std::to_string(b) + "," +
         std::to_string(c) + "]";
}

Int discriminant(const QuadForm& q) { return q.b * q.b - 4 * q.a * q.c; }

static Int isqrt_ll(Int n) {
  if (n < 0) return -1;
  Int r = static_cast<Int>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_perfect_square(Int n) {
  if (n < 0) return false;
  Int r = isqrt_ll(n);
  return r * r == n;
}

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  BigInt r = boost::multiprecision::sqrt(n);
  return r * r == n;
}

bool is_admissible(const QuadForm& q) {
  Int d = discriminant(q);
  return d > 0 && !is_perfect_square(d);
}

QuadForm act(const QuadForm& q, const Mat2& m) {
  if (m.det() != 1) throw std::invalid_argument("act: matrix must have det 1");
  const Int al = m.m00, be = m.m01, ga = m.m10, de = m.m11;
  QuadForm r;
  r.a = q.a * al * al + q.b * al * ga + q.c * ga * ga;
  r.b = 2 * q.a * al * be + q.b * (al * de + be * ga) + 2 * q.c * ga * de;
  r.c = q.a * be * be + q.b * be * de + q.c * de * de;
  return r;
}

std::array<BigInt, 3> act_big(const QuadForm& q, const BigMat2& m) {
  const BigInt al = m.m00, be = m.m01, ga = m.m10, de = m.m11;
  BigInt a = q.a, b = q.b, c = q.c;
  return {a * al * al + b * al * ga + c * ga * ga,
          2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
          a * be * be + b * be * de + c * de * de};
}

std::pair<QuadForm, Mat2> normalize_positive_a(const QuadForm& q) {
  if (!is_admissible(q))
    throw std::invalid_argument("normalize_positive_a: inadmissible form");
  if (q.a > 0) return {q, Mat2::identity()};

  // BFS over words in T, T^-1, S; shortest word wins, generator order breaks ties.
  const Mat2 gens[3] = {Mat2::T(1), Mat2::T(-1), Mat2::S()};
  std::deque<std::pair<QuadForm, Mat2>> queue{{q, Mat2::identity()}};
  std::set<QuadForm> seen{q};
  while (!queue.empty()) {
    auto [f, w] = queue.front();
    queue.pop_front();
    for (const Mat2& g : gens) {
      Mat2 w2 = w * g;
      QuadForm f2 = act(q, w2);
      if (f2.a > 0) return {f2, w2};
      if (seen.insert(f2).second) queue.emplace_back(f2, w2);
      if (seen.size() > 200000)
        throw std::runtime_error("normalize_positive_a: search exhausted");
    }
  }
  throw std::runtime_error("normalize_positive_a: unreachable");
}

std::pair<BigInt, BigInt> pell_unit(Int d) {
  if (d <= 0 || is_perfect_square(d))
    throw std::invalid_argument("pell_unit: d must be positive non-square");
  const Int a0 = isqrt_ll(d);
  // Continued fraction of sqrt(d); convergents until p^2 - d q^2 = 1.
  Int m = 0, den = 1, a = a0;
  BigInt pm1 = 1, p = a0, qm1 = 0, qq = 1;
  for (int iter = 0; iter < 100000000; ++iter) {
    if (p * p - d * qq * qq == 1) return {p, qq};
    m = den * a - m;
    den = (d - m * m) / den;
    a = (a0 + m) / den;
    BigInt pn = a * p + pm1, qn = a * qq + qm1;
    pm1 = p;
    qm1 = qq;
    p = pn;
    qq = qn;
  }
  throw std::runtime_error("pell_unit: did not converge");
}

static BigInt icbrt(const BigInt& n) {
  if (n <= 0) return 0;
  BigInt x = BigInt(1) << (static_cast<unsigned>(msb(n)) / 3 + 1);
  while (true) {
    BigInt y = (2 * x + n / (x * x)) / 3;
    if (y >= x) break;
    x = y;
  }
  while (x * x * x > n) --x;
  while ((x + 1) * (x + 1) * (x + 1) <= n) ++x;
  return x;
}

std::pair<BigInt, BigInt> pell_fundamental(Int D) {
  if (D <= 0 || is_perfect_square(D))
    throw std::invalid_argument("pell_fundamental: D must be positive non-square");
  if (D % 4 == 0) {
    // t even forced; t = 2x with x^2 - (D/4) u^2 = 1.
    auto [x, u] = pell_unit(D / 4);
    return {2 * x, u};
  }
  auto [x1, y1] = pell_unit(D);
  BigInt t = 2 * x1, u = 2 * y1;
  if (D % 2 == 1) {
    // A smaller solution with t, u odd exists iff the even one is its cube:
    // then t0 satisfies t0^3 - 3 t0 = 2 x1.
    BigInt t0 = icbrt(2 * x1);
    for (BigInt cand = t0 - 1; cand <= t0 + 2; ++cand) {
      if (cand <= 2) continue;
      if (cand * cand * cand - 3 * cand != 2 * x1) continue;
      BigInt num = cand * cand - 4;
      if (num % D != 0) continue;
      BigInt usq = num / D;
      if (!is_perfect_square(usq)) continue;
      BigInt u0 = boost::multiprecision::sqrt(usq);
      if (cand % 2 == 1 && u0 % 2 == 1) {
        t = cand;
        u = u0;
        break;
      }
    }
  }
  return {t, u};
}

GeodesicFrame frame(const QuadForm& q) {
  if (!is_admissible(q)) throw std::invalid_argument("frame: inadmissible form");
  if (q.a <= 0) throw std::invalid_argument("frame: requires a > 0");
  const Int D = discriminant(q);
  const double sd = std::sqrt(static_cast<double>(D));

  GeodesicFrame fr;
  fr.w = (-q.b - sd) / (2.0 * q.a);
  fr.wp = (-q.b + sd) / (2.0 * q.a);
  const double s = std::sqrt(static_cast<double>(q.a)) /
                   std::pow(static_cast<double>(D), 0.25);
  fr.sigma = {s * fr.wp, s * fr.w, s, s};

  auto [t, u] = pell_fundamental(D);
  fr.t = t;
  fr.u = u;
  fr.eps = t.convert_to<double>() / 2.0 + u.convert_to<double>() / 2.0 * sd;
  fr.automorph = {(t - q.b * u) / 2, -q.c * u, q.a * u, (t + q.b * u) / 2};
  return fr;
}

std::vector<QuadForm> reduced_forms(Int D) {
  if (D <= 0 || is_perfect_square(D))
    throw std::invalid_argument("reduced_forms: D must be positive non-square");
  std::vector<QuadForm> out;
  const Int bmax = isqrt_ll(D - 1);
  for (Int b = 1; b <= bmax; ++b) {
    if ((D - b * b) % 4 != 0) continue;
    const Int n = (D - b * b) / 4;  // = |a c|, a c < 0
    if (n <= 0) continue;
    for (Int a0 = 1; a0 * a0 <= n; ++a0) {
      if (n % a0 != 0) continue;
      for (Int aa : {a0, n / a0}) {
        // reduced: |sqrt(D) - 2|a|| < b < sqrt(D), exact comparisons
        const Int lo = 2 * aa - b;
        if (!(lo < 0 || lo * lo < D)) continue;
        if (!(D < (2 * aa + b) * (2 * aa + b))) continue;
        const Int cc = n / aa;
        out.push_back({aa, b, -cc});
        out.push_back({-aa, b, cc});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<QuadForm, Mat2> reduction_step(const QuadForm& q) {
  const Int D = discriminant(q);
  const Int c = q.c;
  if (c == 0) throw std::invalid_argument("reduction_step: c = 0 (square D?)");
  const double sd = std::sqrt(static_cast<double>(D));
  // r = -b + 2 c m with sqrt(D) - 2|c| < r < sqrt(D)
  Int m = static_cast<Int>(std::floor((sd + q.b) / (2.0 * c)));
  if (c < 0) m = static_cast<Int>(std::ceil((sd + q.b) / (2.0 * c))) - 1;
  auto ok = [&](Int r) {
    if (r <= 0) return false;
    if (r * r >= D) return false;
    const Int s = r + 2 * std::abs(c);
    return D < s * s;
  };
  for (Int dm = -2; dm <= 2; ++dm) {
    Int mm = m + dm;
    Int r = -q.b + 2 * c * mm;
    if (ok(r)) {
      Mat2 M{0, -1, 1, mm};
      return {act(q, M), M};
    }
  }
  throw std::runtime_error("reduction_step: no valid neighbor found");
}

std::vector<QuadForm> enumerate_classes(Int D) {
  auto red = reduced_forms(D);
  std::set<QuadForm> remaining(red.begin(), red.end());
  std::vector<QuadForm> reps;
  while (!remaining.empty()) {
    QuadForm start = *remaining.begin();
    QuadForm best{0, 0, 0};
    bool have = false;
    QuadForm cur = start;
    do {
      remaining.erase(cur);
      if (cur.a > 0 && (!have || cur < best)) {
        best = cur;
        have = true;
      }
      cur = reduction_step(cur).first;
    } while (cur != start);
    reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

std::pair<BigInt, BigInt> pell_from_cycle(Int D) {
  auto red = reduced_forms(D);
  if (red.empty()) throw std::runtime_error("pell_from_cycle: no reduced forms");
  QuadForm start = red.front();
  for (const auto& f : red)
    if (f.a > 0) {
      start = f;
      break;
    }
  BigMat2 M{1, 0, 0, 1};
  QuadForm cur = start;
  do {
    auto [nxt, step] = reduction_step(cur);
    BigMat2 big{step.m00, step.m01, step.m10, step.m11};
    M = M * big;
    cur = nxt;
  } while (cur != start);
  // M is +-(fundamental automorph)^{+-1}; read off |t|, |u|.
  BigInt t = abs(M.m00 + M.m11);
  BigInt u = abs(M.m10 / start.a);
  return {t, u};
}

}  // namespace cyclint::bqf
