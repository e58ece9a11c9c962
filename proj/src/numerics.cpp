#include "hmflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmflow {

namespace {

// Integral over [x[i], x[i+1]] of the Lagrange cubic through nodes j0..j0+3.
double cell_integral(const std::vector<double>& x, const std::vector<double>& f,
                     std::size_t i, std::size_t j0) {
  const double a = x[i], b = x[i + 1];
  double total = 0.0;
  for (std::size_t j = j0; j < j0 + 4; ++j) {
    // Expand L_j(t) = prod_{k!=j} (t - x_k)/(x_j - x_k) and integrate exactly.
    double xk[3];
    int n = 0;
    double denom = 1.0;
    for (std::size_t k = j0; k < j0 + 4; ++k) {
      if (k == j) continue;
      xk[n++] = x[k];
      denom *= (x[j] - x[k]);
    }
    // (t-p)(t-q)(t-r) = t^3 - (p+q+r)t^2 + (pq+pr+qr)t - pqr
    const double s1 = xk[0] + xk[1] + xk[2];
    const double s2 = xk[0] * xk[1] + xk[0] * xk[2] + xk[1] * xk[2];
    const double s3 = xk[0] * xk[1] * xk[2];
    auto antideriv = [&](double t) {
      return ((t * t * t * t) / 4.0 - s1 * (t * t * t) / 3.0 + s2 * (t * t) / 2.0 - s3 * t);
    };
    total += f[j] * (antideriv(b) - antideriv(a)) / denom;
  }
  return total;
}

}  // namespace

double integrate_samples(const std::vector<double>& x, const std::vector<double>& f) {
  if (x.size() != f.size()) throw std::invalid_argument("integrate_samples: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n < 4) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t j0 = (i == 0) ? 0 : (i + 2 >= n ? n - 4 : i - 1);
    s += cell_integral(x, f, i, j0);
  }
  return s;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_rec(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("pchip_slopes: bad input");
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return d;
  }
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    del[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0)
      s = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0))
      s = 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], del[0], del[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return d;
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  if (x_.size() != y_.size() || x_.size() != dy_.size() || x_.size() < 2)
    throw std::invalid_argument("HermiteTable: bad input");
}

HermiteTable HermiteTable::pchip(std::vector<double> x, std::vector<double> y) {
  auto d = pchip_slopes(x, y);
  return HermiteTable(std::move(x), std::move(y), std::move(d));
}

double HermiteTable::operator()(double xq) const {
  if (xq <= x_.front()) return y_.front();
  if (xq >= x_.back()) return y_.back();
  auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (xq - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * dy_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * dy_[i + 1];
}

double HermiteTable::deriv(double xq) const {
  if (xq <= x_.front()) return dy_.front();
  if (xq >= x_.back()) return dy_.back();
  auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (xq - x_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y_[i] / h + (3 * t2 - 4 * t + 1) * dy_[i] +
          (-6 * t2 + 6 * t) * y_[i + 1] / h + (3 * t2 - 2 * t) * dy_[i + 1]);
}

double brent_root(const std::function<double(double)>& f, double a, double b, double xtol,
                  int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("brent_root: no bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r, s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: bad input");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace hmflow
