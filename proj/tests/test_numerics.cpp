#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hmflow/numerics.hpp"
#include "hmflow/ode.hpp"

using namespace hmflow;

TEST_CASE("sample quadrature is exact for cubics and 4th order for smooth data") {
  std::vector<double> x, f;
  for (int i = 0; i <= 40; ++i) {
    const double xi = std::pow(i / 40.0, 1.3) * 2.0;  // non-uniform
    x.push_back(xi);
    f.push_back(1.0 + xi - 3.0 * xi * xi + 0.5 * xi * xi * xi);
  }
  const double exact = [](double t) {
    return t + t * t / 2.0 - t * t * t + t * t * t * t / 8.0;
  }(2.0);
  CHECK(integrate_samples(x, f) == doctest::Approx(exact).epsilon(1e-11));

  auto err_at = [](int n) {
    std::vector<double> xs, fs;
    for (int i = 0; i <= n; ++i) {
      const double xi = 3.0 * i / n;
      xs.push_back(xi);
      fs.push_back(std::sin(xi));
    }
    return std::abs(integrate_samples(xs, fs) - (1.0 - std::cos(3.0)));
  };
  const double e1 = err_at(50), e2 = err_at(100);
  CHECK(e2 < e1 / 12.0);  // ~16x for a 4th order rule
}

TEST_CASE("adaptive quadrature handles mild endpoint steepness") {
  const double v = integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); }, 1e-12, 1.0,
                                      1e-11, 60);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(integrate_adaptive([](double t) { return std::exp(-t); }, 0.0, 30.0, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pchip preserves monotone data and reproduces nodes") {
  std::vector<double> x{0, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> y{0, 0.6, 0.9, 1.5, 1.6};
  auto tab = HermiteTable::pchip(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(tab(x[i]) == doctest::Approx(y[i]));
  double prev = -1.0;
  for (double q = 0.0; q <= 4.0; q += 1e-3) {
    const double v = tab(q);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("brent finds roots to tolerance") {
  const double r = brent_root([](double t) { return std::cos(t) - t; }, 0.0, 1.5, 1e-14);
  CHECK(std::abs(std::cos(r) - r) < 1e-13);
}

TEST_CASE("dopri5 dense output tracks an oscillator at controller accuracy") {
  auto rhs = [](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  auto path = integrate_dopri5<2>(rhs, 0.0, {0.0, 1.0}, 20.0, 1e-11, 1e-13);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 20.0);
  for (int k = 0; k < 200; ++k) {
    const double t = U(rng);
    const auto y = path.eval(t);
    CHECK(std::abs(y[0] - std::sin(t)) < 2e-9);
    CHECK(std::abs(y[1] - std::cos(t)) < 2e-9);
  }
}

TEST_CASE("line fit recovers exact lines") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double xi : x) y.push_back(3.5 - 2.0 * xi);
  const auto fit = fit_line(x, y);
  CHECK(fit.intercept == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(fit.rms_residual < 1e-13);
}
