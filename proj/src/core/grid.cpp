#include "grid.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace halflap {

Grid make_grid(double a, double b, int n) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgumentError("make_grid: endpoints must be finite");
  }
  if (!(a < b)) {
    std::ostringstream os;
    os << "make_grid: requires a < b, got a=" << a << " b=" << b;
    throw InvalidArgumentError(os.str());
  }
  if (n < 1) {
    throw InvalidArgumentError("make_grid: requires n >= 1 interior nodes");
  }
  Grid g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n + 1);
  return g;
}

GridFunction::GridFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.n) {
    throw InvalidArgumentError("GridFunction: value vector length does not match grid");
  }
}

double GridFunction::eval(double x) const {
  if (x <= grid.a || x >= grid.b) return 0.0;
  const double s = (x - grid.a) / grid.h;  // in (0, n+1)
  const int k = static_cast<int>(std::floor(s));
  const double t = s - k;
  const double left = (k >= 1 && k <= grid.n) ? values[k - 1] : 0.0;
  const double right = (k + 1 >= 1 && k + 1 <= grid.n) ? values[k] : 0.0;
  return (1.0 - t) * left + t * right;
}

GridFunction interpolate(const Grid& grid, const std::function<double(double)>& sampler) {
  GridFunction u(grid);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    const double v = sampler(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "interpolate: non-finite sample at node " << i << " (x=" << x << ")";
      throw InvalidArgumentError(os.str());
    }
    u.values[i] = v;
  }
  return u;
}

double integrate_nodal(const GridFunction& u, const std::function<double(double)>& g) {
  const double g0 = g(0.0);
  if (!std::isfinite(g0)) {
    throw OverflowError("integrate_nodal: g(0) is not finite");
  }
  double sum = 0.0;
  for (int i = 0; i < u.grid.n; ++i) {
    double gi;
    try {
      gi = g(u.values[i]);
    } catch (const OverflowError&) {
      gi = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(gi)) {
      std::ostringstream os;
      os << "integrate_nodal: integrand overflow at node " << i << " (x=" << u.grid.node(i)
         << ", u=" << u.values[i] << ")";
      throw OverflowError(os.str(), i, u.grid.node(i));
    }
    sum += gi - g0;
  }
  return u.grid.h * sum;
}

double checked_exp(double exponent, int node, double x) {
  if (exponent > kExpCap) {
    std::ostringstream os;
    os << "exponent " << exponent << " exceeds cap " << kExpCap;
    if (node >= 0) os << " at node " << node << " (x=" << x << ")";
    throw OverflowError(os.str(), node, x);
  }
  return std::exp(exponent);
}

void write_csv(const GridFunction& u, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) {
    throw InvalidArgumentError("write_csv: cannot open " + path);
  }
  std::fputs("x,u\n", fp);
  for (int i = 0; i < u.grid.n; ++i) {
    std::fprintf(fp, "%.17g,%.17g\n", u.grid.node(i), u.values[i]);
  }
  std::fclose(fp);
}

}  // namespace halflap
