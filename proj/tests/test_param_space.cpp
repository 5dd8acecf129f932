#include <cmath>
#include <memory>
#include <random>

#include "doctest.h"
#include "qgeo/param_space.hpp"

using namespace qgeo;

namespace {

CoordsPtr toy_chart() {
  return std::make_shared<CoordinateSystem>(
      std::vector<std::string>{"t", "B", "X", "W", "Y"});
}

ParameterPoint toy_point(std::vector<double> values) {
  return {toy_chart(), std::move(values)};
}

}  // namespace

TEST_SUITE("param_space") {

TEST_CASE("chart rejects bad layouts") {
  CHECK_THROWS_AS(CoordinateSystem({"X", "t"}), DomainError);
  CHECK_THROWS_AS(CoordinateSystem({"t", "X", "X"}), DomainError);
  CoordinateSystem chart({"t", "X"});
  CHECK(chart.index_of("X") == 1);
  CHECK_THROWS_AS(chart.index_of("nope"), UnknownParameter);
}

TEST_CASE("grid: arithmetic sequence with fixed copy") {
  auto grid = make_grid(toy_chart(), {{"B", 1.0, 2.0, 3}},
                        {{"t", 0.0}, {"X", 1.0}, {"W", 2.0}, {"Y", 0.0}});
  REQUIRE(grid.size() == 3);
  CHECK(grid[0].at("B") == doctest::Approx(1.0));
  CHECK(grid[1].at("B") == doctest::Approx(1.5));
  CHECK(grid[2].at("B") == doctest::Approx(2.0));
  for (const auto& p : grid) CHECK(p.at("X") == 1.0);
}

TEST_CASE("grid: empty sweep gives a single point") {
  auto grid = make_grid(toy_chart(), {},
                        {{"t", 0.0}, {"X", 1.0}, {"W", 1.0}, {"B", 1.0},
                         {"Y", 0.0}});
  REQUIRE(grid.size() == 1);
}

TEST_CASE("grid: product count in declared order") {
  auto grid = make_grid(toy_chart(), {{"B", 0.5, 2.0, 4}, {"Y", 1.0, 3.0, 3}},
                        {{"t", 0.0}, {"X", 1.0}, {"W", 1.0}});
  REQUIRE(grid.size() == 12);
  // First declared range varies slowest.
  CHECK(grid[0].at("B") == doctest::Approx(0.5));
  CHECK(grid[0].at("Y") == doctest::Approx(1.0));
  CHECK(grid[1].at("B") == doctest::Approx(0.5));
  CHECK(grid[1].at("Y") == doctest::Approx(2.0));
  CHECK(grid[3].at("B") == doctest::Approx(1.0));
}

TEST_CASE("grid: errors") {
  CHECK_THROWS_AS(make_grid(toy_chart(), {{"nope", 0, 1, 2}}, {}),
                  UnknownParameter);
  CHECK_THROWS_AS(
      make_grid(toy_chart(), {},
                {{"t", 0.0}, {"X", std::nan("")}, {"W", 1.0}, {"B", 1.0},
                 {"Y", 0.0}}),
      DomainError);
  // Missing assignment.
  CHECK_THROWS_AS(make_grid(toy_chart(), {}, {{"t", 0.0}}), DomainError);
}

TEST_CASE("partial: sin at zero, fourth order") {
  auto p = toy_point({0.0, 1.0, 1.0, 1.0, 1.0});
  auto d = partial([](const ParameterPoint& q) { return std::sin(q.t()); }, p,
                   0, DiffConfig::fourth());
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_FALSE(d.degraded);
}

TEST_CASE("partial: exact on quadratics") {
  auto p = toy_point({0.0, 3.0, 1.0, 1.0, 1.0});
  auto d = partial(
      [](const ParameterPoint& q) { return q.at("B") * q.at("B"); }, p, 1);
  CHECK(d.value == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("second_partial: mixed and diagonal") {
  auto p = toy_point({2.0, 1.0, 5.0, 1.0, 1.0});
  auto mixed = second_partial(
      [](const ParameterPoint& q) { return q.t() * q.at("X"); }, p, 0, 2);
  CHECK(mixed.value == doctest::Approx(1.0).epsilon(1e-8));

  auto px = toy_point({0.0, 1.0, 2.0, 1.0, 1.0});
  auto diag = second_partial(
      [](const ParameterPoint& q) { return std::pow(q.at("X"), 3); }, px, 2,
      2);
  CHECK(diag.value == doctest::Approx(12.0).epsilon(1e-6));
}

TEST_CASE("second_partial: symmetric by construction") {
  auto p = toy_point({1.3, 0.7, 2.1, 1.0, 1.0});
  auto f = [](const ParameterPoint& q) {
    return std::exp(q.t() * 0.3) * std::sin(q.at("X")) + q.at("B") * q.t();
  };
  auto ab = second_partial(f, p, 0, 2);
  auto ba = second_partial(f, p, 2, 0);
  CHECK(ab.value == ba.value);  // bitwise: shared stencil
}

TEST_CASE("partial: linearity property") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  auto p = toy_point({0.8, 1.1, 0.9, 1.0, 1.0});
  auto f = [](const ParameterPoint& q) { return std::sin(q.at("B")) * q.t(); };
  auto g = [](const ParameterPoint& q) { return std::exp(0.5 * q.at("B")); };
  for (int rep = 0; rep < 10; ++rep) {
    const double a = coef(rng), b = coef(rng);
    auto combo = partial(
        [&](const ParameterPoint& q) { return a * f(q) + b * g(q); }, p, 1);
    const double expected =
        a * partial(f, p, 1).value + b * partial(g, p, 1).value;
    CHECK(combo.value == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("fourth-order error scaling on exp") {
  auto p = toy_point({1.0, 1.0, 1.0, 1.0, 1.0});
  auto f = [](const ParameterPoint& q) { return std::exp(q.t()); };
  const double exact = std::exp(1.0);
  double err[2];
  const double steps[2] = {1e-1, 1e-2};
  for (int i = 0; i < 2; ++i) {
    DiffConfig cfg{Stencil::central4, steps[i], false};
    err[i] = std::abs(partial(f, p, 0, cfg).value - exact);
  }
  const double order = std::log10(err[0] / err[1]);
  CHECK(order >= 3.5);
}

TEST_CASE("stencil crossing a boundary degrades to one-sided") {
  auto p = toy_point({0.0, 1.0, 1e-7, 1.0, 1.0});
  auto f = [](const ParameterPoint& q) {
    if (q.at("X") <= 0) throw DomainError("X must stay positive");
    return q.at("X") * q.at("X") + 2.0 * q.at("X");
  };
  DiffConfig cfg;
  cfg.base_step = 1e-5;
  cfg.relative_step = false;
  auto d = partial(f, p, 2, cfg);
  CHECK(d.degraded);
  CHECK(d.value == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("no evaluable stencil names the constraint") {
  auto p = toy_point({0.0, 1.0, 0.0, 1.0, 1.0});
  auto f = [](const ParameterPoint&) -> double {
    throw DomainError("always outside");
  };
  CHECK_THROWS_AS(partial(f, p, 2), DomainError);
}

}  // TEST_SUITE
