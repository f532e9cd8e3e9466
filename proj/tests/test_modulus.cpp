#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sumlab/modulus.hpp"

using namespace sumlab;

namespace {

// Independent root finder for w*e^w = x, bisection to 1e-14.
double lambert_w_bisect(double x) {
  double lo = 0.0, hi = std::max(1.0, std::log1p(x));
  while (hi * std::exp(hi) < x) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("modulus evaluation matches the closed forms") {
  CHECK(eval_modulus(make_identity(), 7.5) == 7.5);
  CHECK(eval_modulus(make_log1p(), 0.0) == 0.0);
  CHECK(eval_modulus(make_x_plus_ratio(), 1.0) == Catch::Approx(1.5).epsilon(1e-15));
  CHECK(eval_modulus(make_power_sum(0.5, 0.5), 4.0) == Catch::Approx(4.0).epsilon(1e-15));
  CHECK(eval_modulus(make_power_plus_log(1.0), 1.0) ==
        Catch::Approx(1.0 + std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("lambert W solves w*e^w = x against a bisection oracle") {
  CHECK(lambert_w(std::exp(1.0)) == Catch::Approx(1.0).margin(1e-12));
  for (double x : {1e-6, 0.5, 1.0, 10.0, 1e4, 1e10, 1e80, 1e200}) {
    const double w = lambert_w(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-11 * std::max(1.0, x));
    // Solver contract is an absolute residual bound, so compare with margin.
    CHECK(w == Catch::Approx(lambert_w_bisect(x)).epsilon(1e-9).margin(1e-11));
  }
  CHECK(lambert_w(0.0) == 0.0);
}

TEST_CASE("modulus input and parameter validation") {
  CHECK_THROWS_AS(eval_modulus(make_identity(), -1.0), Error);
  Modulus bad = make_power_sum(0.5, 0.5);
  bad.p = 1.5;
  CHECK_THROWS_AS(eval_modulus(bad, 1.0), Error);
  bad.p = 0.0;
  CHECK_THROWS_AS(eval_modulus(bad, 1.0), Error);
  try {
    eval_modulus(make_identity(), -1.0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::negative_input);
  }
}

TEST_CASE("axiom checks pass on the known moduli") {
  for (const auto& m : {make_identity(), make_log1p(), make_lambert_w(), make_x_plus_ratio(),
                        make_power_sum(0.5, 0.5), make_power_plus_log(0.5)}) {
    const auto rep = check_modulus_axioms(m, 1e6, 1000);
    INFO(m.name);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("axiom checks flag a superadditive evaluator with a witness pair") {
  const auto square = make_custom([](double x) { return x * x; }, "square");
  const auto rep = check_modulus_axioms(square, 1e6, 1000);
  CHECK_FALSE(rep.subadditive.pass);
  CHECK_FALSE(rep.subadditive.detail.empty());
  CHECK(rep.increasing.pass);
}

TEST_CASE("axiom checks flag a bounded evaluator") {
  const auto bounded = make_custom([](double x) { return x / (x + 1.0); }, "bounded");
  const auto rep = check_modulus_axioms(bounded, 1e6, 500);
  CHECK_FALSE(rep.unbounded.pass);
}

TEST_CASE("axiom grid preconditions") {
  CHECK_THROWS_AS(check_modulus_axioms(make_identity(), 1e6, 1), Error);
  CHECK_THROWS_AS(check_modulus_axioms(make_identity(), -2.0, 10), Error);
}
