#include "rvg/predicates.hpp"

#include <cmath>
#include <gmpxx.h>

#include "rvg/geometry.hpp"

namespace rvg {

namespace {

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;

inline void twoSum(double a, double b, double& s, double& e) {
  s = a + b;
  double bv = s - a;
  double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void twoProduct(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Adds b to a nonoverlapping expansion stored in increasing magnitude order.
int growExpansion(double* e, int n, double b, double* out) {
  double q = b;
  int m = 0;
  for (int i = 0; i < n; ++i) {
    double s, h;
    twoSum(q, e[i], s, h);
    q = s;
    if (h != 0.0) out[m++] = h;
  }
  if (q != 0.0 || m == 0) out[m++] = q;
  return m;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

namespace detail {

int exactOrientSign(double ax, double ay, double bx, double by, double cx, double cy) {
  const double factors[6][2] = {{ax, by}, {-ax, cy}, {-cx, by}, {-ay, bx}, {ay, cx}, {cy, bx}};
  double bufA[16];
  double bufB[16];
  double* cur = bufA;
  double* nxt = bufB;
  int len = 0;
  for (const auto& f : factors) {
    double p, e;
    twoProduct(f[0], f[1], p, e);
    len = growExpansion(cur, len, e, nxt);
    std::swap(cur, nxt);
    len = growExpansion(cur, len, p, nxt);
    std::swap(cur, nxt);
  }
  for (int i = len - 1; i >= 0; --i) {
    if (cur[i] != 0.0) return sign(cur[i]);
  }
  return 0;
}

}  // namespace detail

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  const double bound = kCcwBound * (std::fabs(left) + std::fabs(right));
  if (det > bound || -det > bound) return sign(det);
  return detail::exactOrientSign(a.x, a.y, b.x, b.y, c.x, c.y);
}

Orientation orientation(const Point2& a, const Point2& b, const Point2& c) {
  return static_cast<Orientation>(orient2d(a, b, c));
}

int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                     clift * (adx * bdy - bdx * ady);
  const double permanent = (std::fabs(bdx * cdy) + std::fabs(cdx * bdy)) * alift +
                           (std::fabs(cdx * ady) + std::fabs(adx * cdy)) * blift +
                           (std::fabs(adx * bdy) + std::fabs(bdx * ady)) * clift;
  const double bound = kIccBound * permanent;
  if (det > bound || -det > bound) return sign(det);

  const mpq_class qadx = mpq_class(a.x) - d.x, qady = mpq_class(a.y) - d.y;
  const mpq_class qbdx = mpq_class(b.x) - d.x, qbdy = mpq_class(b.y) - d.y;
  const mpq_class qcdx = mpq_class(c.x) - d.x, qcdy = mpq_class(c.y) - d.y;
  const mpq_class exact = (qadx * qadx + qady * qady) * (qbdx * qcdy - qcdx * qbdy) +
                          (qbdx * qbdx + qbdy * qbdy) * (qcdx * qady - qadx * qcdy) +
                          (qcdx * qcdx + qcdy * qcdy) * (qadx * qbdy - qbdx * qady);
  return sgn(exact);
}

}  // namespace rvg
