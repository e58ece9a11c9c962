#ifndef HMFLOW_ODE_HPP
#define HMFLOW_ODE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hmflow/errors.hpp"

namespace hmflow {

// Dormand-Prince 5(4) with Hairer's quartic continuous extension.  The whole
// path is retained so profiles can be evaluated anywhere after the fact.
template <std::size_t N>
class OdePath {
 public:
  using Vec = std::array<double, N>;
  struct Step {
    double x0, h;
    std::array<Vec, 5> rcont;
  };

  double x_begin() const { return x_begin_; }
  double x_end() const { return x_end_; }
  const Vec& y_begin() const { return y_begin_; }
  const Vec& y_end() const { return y_end_; }
  const std::vector<Step>& steps() const { return steps_; }

  Vec eval(double x) const {
    const Step& s = step_at(x);
    const double th = (x - s.x0) / s.h;
    const double th1 = 1.0 - th;
    Vec out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = s.rcont[0][i] +
               th * (s.rcont[1][i] +
                     th1 * (s.rcont[2][i] + th * (s.rcont[3][i] + th1 * s.rcont[4][i])));
    }
    return out;
  }

  double eval_component(double x, std::size_t i) const { return eval(x)[i]; }

 private:
  const Step& step_at(double x) const {
    // binary search over step starts
    std::size_t lo = 0, hi = steps_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (steps_[mid].x0 <= x)
        lo = mid;
      else
        hi = mid;
    }
    return steps_[lo];
  }

  template <std::size_t M, typename F>
  friend OdePath<M> integrate_dopri5(F&& f, double x0, const std::array<double, M>& y0,
                                     double x_end, double rtol, double atol, long max_steps);

  std::vector<Step> steps_;
  double x_begin_ = 0, x_end_ = 0;
  Vec y_begin_{}, y_end_{};
};

// f(x, y, dydx).  Throws StepUnderflow if the controller collapses the step.
template <std::size_t N, typename F>
OdePath<N> integrate_dopri5(F&& f, double x0, const std::array<double, N>& y0, double x_end,
                            double rtol, double atol, long max_steps = 2000000) {
  using Vec = std::array<double, N>;
  static constexpr double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
  static constexpr double a21 = 1. / 5;
  static constexpr double a31 = 3. / 40, a32 = 9. / 40;
  static constexpr double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
  static constexpr double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                          a54 = -212. / 729;
  static constexpr double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                          a64 = 49. / 176, a65 = -5103. / 18656;
  static constexpr double a71 = 35. / 384, a73 = 500. / 1113, a74 = 125. / 192,
                          a75 = -2187. / 6784, a76 = 11. / 84;
  static constexpr double e1 = 71. / 57600, e3 = -71. / 16695, e4 = 71. / 1920,
                          e5 = -17253. / 339200, e6 = 22. / 525, e7 = -1. / 40;
  static constexpr double d1 = -12715105075. / 11282082432., d3 = 87487479700. / 32700410799.,
                          d4 = -10690763975. / 1880347072., d5 = 701980252875. / 199316789632.,
                          d6 = -1453857185. / 822651844., d7 = 69997945. / 29380423.;

  OdePath<N> path;
  path.x_begin_ = x0;
  path.y_begin_ = y0;
  const double dir = (x_end >= x0) ? 1.0 : -1.0;
  double x = x0;
  Vec y = y0;
  Vec k1;
  f(x, y, k1);
  double h = dir * std::min(std::abs(x_end - x0), 1e-4 * (std::abs(x0) + 1.0));
  if (h == 0.0) h = dir * 1e-8;

  long n = 0;
  while (dir * (x_end - x) > 0.0) {
    if (++n > max_steps) throw StepUnderflow("dopri5: step budget exhausted");
    if (dir * (x + h) > dir * x_end) h = x_end - x;
    if (std::abs(h) < 1e-14 * (std::abs(x) + 1e-14))
      throw StepUnderflow("dopri5: step size underflow");

    Vec k2, k3, k4, k5, k6, k7, yt, ynew;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    f(x + c2 * h, yt, k2);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(x + c3 * h, yt, k3);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(x + c4 * h, yt, k4);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(x + c5 * h, yt, k5);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(x + h, yt, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] =
          y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(x + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / N);

    if (err <= 1.0) {
      typename OdePath<N>::Step st;
      st.x0 = x;
      st.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        st.rcont[0][i] = y[i];
        st.rcont[1][i] = ydiff;
        st.rcont[2][i] = bspl;
        st.rcont[3][i] = ydiff - h * k7[i] - bspl;
        st.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                              d7 * k7[i]);
      }
      path.steps_.push_back(st);
      x += h;
      y = ynew;
      k1 = k7;  // FSAL
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::max(0.9 * std::pow(err, -0.2), 0.1);
    }
  }
  path.x_end_ = x;
  path.y_end_ = y;
  return path;
}

}  // namespace hmflow

#endif
