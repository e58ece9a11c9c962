#ifndef HMFLOW_NUMERICS_HPP
#define HMFLOW_NUMERICS_HPP

#include <functional>
#include <vector>

namespace hmflow {

// Composite quadrature of samples f(x_i) on a strictly increasing grid.
// Each cell is integrated with the cubic through its four nearest nodes,
// so the rule is 4th order on smooth integrands and exact for cubics.
double integrate_samples(const std::vector<double>& x, const std::vector<double>& f);

// Adaptive Simpson for callables; tol is absolute.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

// Monotone cubic (Fritsch-Carlson) slopes for tabulated data.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y);

// Cubic Hermite evaluation of (x, y, dy) tables; x strictly increasing.
// Out-of-range queries are clamped to the end values.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy);
  static HermiteTable pchip(std::vector<double> x, std::vector<double> y);
  double operator()(double xq) const;
  double deriv(double xq) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& abscissas() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, dy_;
};

// Brent root bracketing; requires f(a)*f(b) <= 0.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol, int max_iter = 200);

// Linear least squares y ~ c0 + c1 x; returns {c0, c1, rms_residual}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hmflow

#endif
