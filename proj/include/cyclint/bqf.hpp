#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cyclint::bqf {

using Int = long long;
using BigInt = boost::multiprecision::cpp_int;

// 2x2 integer matrix (row major).
struct Mat2 {
  Int m00, m01, m10, m11;

  Int det() const { return m00 * m11 - m01 * m10; }
  Mat2 operator*(const Mat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  bool operator==(const Mat2&) const = default;

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 S() { return {0, -1, 1, 0}; }       // z -> -1/z
  static Mat2 T(Int n = 1) { return {1, n, 0, 1}; } // z -> z + n
};

// Same thing with arbitrary-precision entries; automorphs outgrow 64 bits
// already for moderate discriminants.
struct BigMat2 {
  BigInt m00, m01, m10, m11;

  BigInt det() const { return m00 * m11 - m01 * m10; }
  BigMat2 operator*(const BigMat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  bool operator==(const BigMat2&) const = default;
};

// Integral binary quadratic form a X^2 + b X Y + c Y^2.
struct QuadForm {
  Int a = 0, b = 0, c = 0;

  bool operator==(const QuadForm&) const = default;
  auto operator<=>(const QuadForm&) const = default;
  std::string str() const;
};

Int discriminant(const QuadForm& q);

// true iff D > 0 and D is not a perfect square (closed geodesic case).
bool is_admissible(const QuadForm& q);

// Exact integer square root test.
bool is_perfect_square(const BigInt& n);
bool is_perfect_square(Int n);

// (Q o M)(X, Y) = Q(m00 X + m01 Y, m10 X + m11 Y).  Throws unless det M = 1.
QuadForm act(const QuadForm& q, const Mat2& m);

// Exact action with big-integer entries, used to check Q o automorph = Q.
std::array<BigInt, 3> act_big(const QuadForm& q, const BigMat2& m);

// Gamma-equivalent form with a > 0 together with the transforming matrix,
// found by breadth-first search over words in T, T^-1, S.
std::pair<QuadForm, Mat2> normalize_positive_a(const QuadForm& q);

// Minimal positive solution of t^2 - D u^2 = 4, via the continued fraction
// of sqrt(D).  Throws for D <= 0 or D square.
std::pair<BigInt, BigInt> pell_fundamental(Int D);

// Minimal positive (x, y) with x^2 - d y^2 = 1, d > 0 non-square.
std::pair<BigInt, BigInt> pell_unit(Int d);

struct GeodesicFrame {
  double w = 0, wp = 0;              // real endpoints, w < wp
  std::array<double, 4> sigma{};     // row major; maps 0 -> w, infinity -> wp
  double eps = 0;                    // (t + u sqrt(D)) / 2 > 1
  BigMat2 automorph{};               // generates the stabilizer of Q up to sign
  BigInt t, u;                       // fundamental solution of t^2 - D u^2 = 4
};

// Requires a > 0 and an admissible form.
GeodesicFrame frame(const QuadForm& q);

// One representative per Gamma-class of discriminant D, a > 0,
// lexicographically smallest (a,b,c) of each reduction cycle.
std::vector<QuadForm> enumerate_classes(Int D);

// All reduced forms of discriminant D: |sqrt(D) - 2|a|| < b < sqrt(D).
std::vector<QuadForm> reduced_forms(Int D);

// Right-neighbor step of the reduction cycle, and its transforming matrix.
std::pair<QuadForm, Mat2> reduction_step(const QuadForm& q);

// Fundamental automorph read off by composing the reduction cycle of the
// class of Q; an independent route to pell_fundamental used in tests.
std::pair<BigInt, BigInt> pell_from_cycle(Int D);

}  // namespace cyclint::bqf
