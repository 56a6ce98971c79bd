#include <cmath>
#include <limits>

#include "doctest.h"
#include "refprior/errors.hpp"
#include "refprior/quadrature.hpp"

using namespace refprior;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("integrate_adaptive reproduces closed-form integrals") {
  const QuadResult cube =
      integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(cube.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const QuadResult cosine =
      integrate_adaptive([](double x) { return std::cos(x); }, 0.0, 2.0);
  CHECK(cosine.value == doctest::Approx(std::sin(2.0)).epsilon(1e-12));

  const QuadResult power =
      integrate_adaptive([](double t) { return std::pow(t, -5.0); }, 2.0,
                         kInf);
  CHECK(power.value == doctest::Approx(1.0 / 64.0).epsilon(1e-10));
}

TEST_CASE("integrate_adaptive handles an integrable endpoint singularity") {
  const QuadResult r = integrate_adaptive(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
      {.rel_tol = 1e-8, .abs_tol = 1e-12, .max_subdivisions = 2000});
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("semi-infinite integrals agree across both tail transforms") {
  for (TailTransform tail : {TailTransform::OneOverX, TailTransform::ExpDecay}) {
    QuadratureSettings s;
    s.tail = tail;
    const QuadResult unit =
        integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, kInf,
                           s);
    CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-10));
    const QuadResult gamma4 = integrate_adaptive(
        [](double x) { return x * x * x * std::exp(-x); }, 0.0, kInf, s);
    CHECK(gamma4.value == doctest::Approx(6.0).epsilon(1e-9));
  }
}

TEST_CASE("integrate_adaptive rejects invalid input") {
  const auto one = [](double) { return 1.0; };
  CHECK_THROWS_AS(integrate_adaptive(one, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(integrate_adaptive(one, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(integrate_adaptive(one, kInf, kInf), DomainError);
  CHECK_THROWS_AS(
      integrate_adaptive([](double) { return std::nan(""); }, 0.0, 1.0),
      NaNError);
}

TEST_CASE("integrate_adaptive raises QuadratureError when starved") {
  QuadratureSettings starved;
  starved.rel_tol = 1e-15;
  starved.abs_tol = 0.0;
  starved.max_subdivisions = 1;
  CHECK_THROWS_AS(integrate_adaptive(
                      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                      starved),
                  QuadratureError);
}

TEST_CASE("log_integrate matches the direct computation on easy integrands") {
  const double logged = log_integrate(
      [](double x) { return 2.0 * std::log(x); }, 0.0, 1.0);
  CHECK(logged == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-10));

  const double expo =
      log_integrate([](double x) { return -x; }, 0.0, kInf);
  CHECK(expo == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("log_integrate is shift invariant far outside double range") {
  const auto logf = [](double x) { return -(x - 0.5) * (x - 0.5) * 1e4; };
  const double base = log_integrate(logf, 0.0, 1.0);
  // A sharp Gaussian: integral over (0,1) is sqrt(pi / 1e4) to 1e-1000.
  CHECK(base == doctest::Approx(std::log(std::sqrt(M_PI / 1e4))).epsilon(1e-9));
  for (double shift : {-500.0, -120.0, 300.0, 500.0}) {
    const double shifted =
        log_integrate([&](double x) { return logf(x) + shift; }, 0.0, 1.0);
    CHECK(std::abs(shifted - (base + shift)) < 1e-12 * (1.0 + std::abs(base + shift)));
  }
}

TEST_CASE("log_integrate tolerates -infinity regions and empty mass") {
  const double half = log_integrate(
      [](double x) { return x < 0.5 ? -kInf : 0.0; }, 0.0, 1.0);
  CHECK(half == doctest::Approx(std::log(0.5)).epsilon(1e-6));

  const double nothing =
      log_integrate([](double) { return -kInf; }, 0.0, 1.0);
  CHECK(nothing == -kInf);
}
