#include "quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace halflap {

namespace {

// G7K15 nodes/weights on [-1,1] (positive half; node 0 included once).
constexpr double kKronrodNodes[8] = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
constexpr double kKronrodWeights[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
// Gauss-7 weights for Kronrod nodes 0,2,4,6 (even indices).
constexpr double kGaussWeights[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

struct Panel {
  double gauss;
  double kronrod;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double fk[15];
  fk[7] = f(c);
  for (int i = 1; i < 8; ++i) {
    const double dx = hw * kKronrodNodes[i];
    fk[7 - i] = f(c - dx);
    fk[7 + i] = f(c + dx);
  }
  double kr = kKronrodWeights[0] * fk[7];
  for (int i = 1; i < 8; ++i) kr += kKronrodWeights[i] * (fk[7 - i] + fk[7 + i]);
  double g = kGaussWeights[0] * fk[7];
  for (int i = 1; i < 4; ++i) g += kGaussWeights[i] * (fk[7 - 2 * i] + fk[7 + 2 * i]);
  Panel p;
  p.gauss = g * hw;
  p.kronrod = kr * hw;
  p.error = std::abs(p.kronrod - p.gauss);
  return p;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             int max_depth) {
  const Panel p = gk15(f, a, b);
  if (depth >= max_depth || p.error <= tol) return p.kronrod;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth) {
  const Panel first = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(first.kronrod));
  if (first.error <= tol) return first.kronrod;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, 1, max_depth) + adapt(f, c, b, 0.5 * tol, 1, max_depth);
}

double integrate_adaptive_split(const std::function<double(double)>& f, double a, double b,
                                const std::vector<double>& split_points, double rel_tol,
                                double abs_tol, int max_depth) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double s : split_points) {
    if (s > a && s < b) pts.push_back(s);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    total += integrate_adaptive(f, pts[i], pts[i + 1], rel_tol, abs_tol, max_depth);
  }
  return total;
}

}  // namespace halflap
