#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "svlasov/montecarlo.hpp"

using namespace svlasov;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Observable kBoth[] = {Observable::l2sq, Observable::mass};
}  // namespace

TEST_CASE("two-stream initial value and force field") {
  CHECK(two_stream_f0(0.0, 0.0) == 0.0);
  CHECK(two_stream_f0(0.0, 1.0) == doctest::Approx(1.05 * std::exp(-0.5) / std::sqrt(kTwoPi)).epsilon(1e-15));
  CHECK(two_stream_f0(0.5, -2.0) == doctest::Approx(0.95 * 4.0 * std::exp(-2.0) / std::sqrt(kTwoPi)).epsilon(1e-15));
  CHECK(cosine_field(0.0) == 1.0);
  CHECK(cosine_field(0.5) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("make_setup") {
  const auto g = build_grid(8, 17, kTwoPi);
  const auto det = make_setup(Scheme::deterministic, "anything", g, 0.1, 3, 0);
  CHECK_FALSE(det.noise);
  CHECK(det.components() == 1);
  const auto add = make_setup(Scheme::additive, "gauss_pair", g, 0.1, 3, 9);
  REQUIRE(add.noise);
  CHECK(add.components() == 2);
  CHECK(add.stream(4).sample_index == 4u);
  CHECK(add.stream(4).master_seed == 9u);
  CHECK_THROWS_AS(make_setup(Scheme::transport, "sin_v3", g, 0.1, 3, 0), std::invalid_argument);
}

TEST_CASE("step_count") {
  CHECK(step_count(2.5, 0.1) == 25);
  CHECK(step_count(1.0, 0.1) == 10);
  CHECK(step_count(0.5, 1.0 / 4096) == 2048);
  CHECK(step_count(0.0, 0.1) == 0);
  CHECK_THROWS_AS(step_count(1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(step_count(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step_count(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("loglog_slope") {
  const double x[] = {0.1, 0.05, 0.025, 0.0125};
  const double quad[] = {3e-2, 7.5e-3, 1.875e-3, 4.6875e-4};
  CHECK(loglog_slope(x, quad) == doctest::Approx(2.0).epsilon(1e-12));
  const double with_zero[] = {0.2, 0.1, 0.05, 0.0};
  CHECK(loglog_slope(x, with_zero) == doctest::Approx(1.0).epsilon(1e-12));
  const double one_point[] = {1.0, 0.0, 0.0, 0.0};
  CHECK(std::isnan(loglog_slope(x, one_point)));
}

TEST_CASE("run_ensemble") {
  const auto g = build_grid(16, 33, kTwoPi);
  const auto setup = make_setup(Scheme::additive, "half_sin_v3", g, 0.1, 5, 3);

  SUBCASE("thread count does not change the result") {
    const auto a = run_ensemble(setup, 13, kBoth, 1);
    const auto b = run_ensemble(setup, 13, kBoth, 4);
    for (Observable o : kBoth) {
      CHECK(a.get(o).mean == b.get(o).mean);
      CHECK(a.get(o).variance == b.get(o).variance);
    }
  }
  SUBCASE("means and variances of independent paths") {
    const auto stats = run_ensemble(setup, 4, kBoth, 2);
    REQUIRE(stats.t.size() == 6u);
    CHECK(stats.t.back() == doctest::Approx(0.5));
    double values[4];
    for (int m = 0; m < 4; ++m)
      values[m] = l2_squared(run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), setup.stream(m), 5).field);
    const double mean = (values[0] + values[1] + values[2] + values[3]) / 4.0;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= 3.0;
    const auto& l2 = stats.get(Observable::l2sq);
    CHECK(l2.mean.back() == doctest::Approx(mean).epsilon(1e-14));
    CHECK(l2.variance.back() == doctest::Approx(var).epsilon(1e-12));
    CHECK(l2.std_error.back() == doctest::Approx(std::sqrt(var / 4.0)).epsilon(1e-12));
    CHECK(l2.mean.front() == l2_squared(setup.f0));
    CHECK(l2.variance.front() == 0.0);
    CHECK_THROWS_AS(stats.get(Observable::linf), std::out_of_range);
  }
  SUBCASE("one sample has undefined variance") {
    const auto stats = run_ensemble(setup, 1, kBoth, 1);
    CHECK(std::isnan(stats.get(Observable::mass).variance.back()));
    CHECK(std::isnan(stats.get(Observable::mass).std_error.back()));
  }
  SUBCASE("deterministic paths do not vary") {
    const auto det = make_setup(Scheme::deterministic, "", g, 0.1, 5, 3);
    const auto stats = run_ensemble(det, 3, kBoth, 1);
    CHECK(stats.get(Observable::l2sq).variance.back() == 0.0);
  }
  CHECK_THROWS_AS(run_ensemble(setup, 0, kBoth), std::invalid_argument);
}

TEST_CASE("reported standard errors match the spread across seeds") {
  const auto g = build_grid(16, 33, kTwoPi);
  const int seeds = 30;
  double sum = 0.0, sq = 0.0, se = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto setup = make_setup(Scheme::additive, "half_sin_v3", g, 0.1, 5, 1000 + s);
    const auto stats = run_ensemble(setup, 100, kBoth, 0);
    const double m = stats.get(Observable::l2sq).mean.back();
    sum += m;
    sq += m * m;
    se += stats.get(Observable::l2sq).std_error.back();
  }
  const double mean = sum / seeds;
  const double spread = std::sqrt((sq - seeds * mean * mean) / (seeds - 1));
  const double ratio = spread / (se / seeds);
  CHECK(ratio > 0.6);
  CHECK(ratio < 1.5);
}

TEST_CASE("ms_convergence") {
  const auto g = build_grid(16, 33, kTwoPi);
  const auto setup = make_setup(Scheme::additive, "half_sin_v3", g, 0.1, 0, 2);
  const double tau_ref = 1.0 / 64;

  SUBCASE("the reference step has zero error") {
    const auto table = ms_convergence(setup, 0.25, {tau_ref}, tau_ref, 3, 1);
    REQUIRE(table.rows.size() == 1u);
    CHECK(table.rows[0].rms_error == 0.0);
    CHECK(std::isnan(table.slope));
  }
  SUBCASE("rows are sorted and errors shrink with the step") {
    const auto table = ms_convergence(setup, 0.25, {1.0 / 32, 1.0 / 8, 1.0 / 16}, tau_ref, 8, 2);
    REQUIRE(table.rows.size() == 3u);
    CHECK(table.rows[0].tau == 0.125);
    CHECK(table.rows[2].tau == 1.0 / 32);
    CHECK(table.rows[0].rms_error > table.rows[1].rms_error);
    CHECK(table.rows[1].rms_error > table.rows[2].rms_error);
    CHECK(table.slope > 0.0);
    const auto again = ms_convergence(setup, 0.25, {1.0 / 32, 1.0 / 8, 1.0 / 16}, tau_ref, 8, 1);
    for (int q = 0; q < 3; ++q) CHECK(again.rows[q].rms_error == table.rows[q].rms_error);
  }
  SUBCASE("invalid step sets") {
    CHECK_THROWS_AS(ms_convergence(setup, 0.25, {}, tau_ref, 2), std::invalid_argument);
    CHECK_THROWS_AS(ms_convergence(setup, 0.25, {0.125, 0.125}, tau_ref, 2), std::invalid_argument);
    CHECK_THROWS_AS(ms_convergence(setup, 0.25, {3.0 / 64}, tau_ref, 2), std::invalid_argument);
    CHECK_THROWS_AS(ms_convergence(setup, 0.25, {0.5}, tau_ref, 2), std::invalid_argument);
    CHECK_THROWS_AS(ms_convergence(setup, 0.25, {0.125}, tau_ref, 0), std::invalid_argument);
  }
}
