#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cglmp/analytic.hpp"
#include "cglmp/bell.hpp"
#include "cglmp/optimize.hpp"
#include "cglmp/qstate.hpp"

using namespace cglmp;
using Catch::Approx;

namespace {
constexpr double PI = std::numbers::pi;

double pipeline_value(int d, const std::vector<double>& thetas, double e1,
                      double e2) {
  return cglmp_value(state_from_schmidt(SchmidtAngles(d, thetas)),
                     restricted_settings(d, {e1, e2}));
}
}  // namespace

TEST_CASE("I2 closed form") {
  REQUIRE(i2_closed_form(0, 0, 0) == 2.0);
  REQUIRE(i2_closed_form(PI / 4, -PI / 8, PI / 8) ==
          Approx(2 * std::sqrt(2.0)).margin(1e-15));
  SECTION("bounded by 2 sqrt(1 + sin^2 2t1) on a grid") {
    const double t1 = PI / 6;
    const double bound = 2 * std::sqrt(1 + std::pow(std::sin(2 * t1), 2));
    REQUIRE(bound == Approx(2.645751311).margin(1e-9));
    for (int a = 0; a < 200; ++a)
      for (int b = 0; b < 200; ++b) {
        const double e1 = -PI / 2 + PI * a / 199;
        const double e2 = -PI / 2 + PI * b / 199;
        REQUIRE(i2_closed_form(t1, e1, e2) <= bound + 1e-12);
      }
  }
}

TEST_CASE("I3 closed form") {
  SECTION("theta2 = pi/2 pins the value at 2") {
    SplitMix64 rng(1);
    for (int i = 0; i < 100; ++i)
      REQUIRE(i3_closed_form(rng.uniform(0, PI), PI / 2, rng.uniform(-PI, PI),
                             rng.uniform(-PI, PI)) == Approx(2.0).margin(1e-12));
  }
  SECTION("maximal two-level point") {
    REQUIRE(i3_closed_form(PI / 4, 0, -PI / 8, PI / 8) ==
            Approx(0.5 * (1 + 3 * std::sqrt(2.0))).margin(1e-12));
    REQUIRE(0.5 * (1 + 3 * std::sqrt(2.0)) == Approx(2.621320).margin(5e-7));
  }
  SECTION("agrees with the measurement pipeline") {
    SplitMix64 rng(2);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const double t1 = rng.uniform(0, PI / 2), t2 = rng.uniform(0, PI / 2);
      const double e1 = rng.uniform(-PI, PI), e2 = rng.uniform(-PI, PI);
      worst = std::max(worst, std::abs(i3_closed_form(t1, t2, e1, e2) -
                                       pipeline_value(3, {t1, t2}, e1, e2)));
    }
    REQUIRE(worst <= 1e-9);
  }
}

TEST_CASE("Id closed form for d >= 4") {
  SECTION("theta2 = pi/2 pins the value at 2") {
    REQUIRE(id_closed_form(0.7, PI / 2, 0.3, -0.9, 5) ==
            Approx(2.0).margin(1e-12));
  }
  SECTION("frozen optimal values at theta1=pi/4, theta2=0") {
    auto eta = optimal_eta(PI / 4);
    REQUIRE(id_closed_form(PI / 4, 0, eta.eta1, eta.eta2, 4) ==
            Approx((2 + 4 * std::sqrt(2.0)) / 3).margin(1e-12));
    REQUIRE(id_closed_form(PI / 4, 0, eta.eta1, eta.eta2, 5) ==
            Approx((3 + 5 * std::sqrt(2.0)) / 4).margin(1e-12));
  }
  SECTION("d < 4 rejected") {
    REQUIRE_THROWS_AS(id_closed_form(0.1, 0.1, 0, 0, 3), std::invalid_argument);
  }
  SECTION("agrees with the pipeline for fully random angle vectors") {
    SplitMix64 rng(3);
    for (int d : {4, 5}) {
      double worst = 0;
      for (int i = 0; i < 1000; ++i) {
        std::vector<double> th(d - 1);
        for (double& t : th) t = rng.uniform(0, PI / 2);
        const double e1 = rng.uniform(-PI, PI), e2 = rng.uniform(-PI, PI);
        worst = std::max(worst, std::abs(id_closed_form(th[0], th[1], e1, e2, d) -
                                         pipeline_value(d, th, e1, e2)));
      }
      REQUIRE(worst <= 1e-9);
    }
  }
  SECTION("value is independent of theta3..theta_{d-1}") {
    REQUIRE(id_closed_form(0.3, 0.8, 0.2, -0.1, 6) ==
            id_closed_form(0.3, 0.8, 0.2, -0.1, 6));
    // and the pipeline agrees regardless of the higher thetas
    const double a = pipeline_value(6, {0.3, 0.8, 0.1, 0.2, 0.3}, 0.2, -0.1);
    const double b = pipeline_value(6, {0.3, 0.8, 1.4, 0.9, 1.1}, 0.2, -0.1);
    REQUIRE(a == Approx(b).margin(1e-12));
  }
}

TEST_CASE("restricted bound") {
  REQUIRE(restricted_bound(PI / 4, 0, 2) ==
          Approx(2 * std::sqrt(2.0)).margin(1e-15));
  REQUIRE(restricted_bound(PI / 4, 0, 3) ==
          Approx(0.5 * (1 + 3 * std::sqrt(2.0))).margin(1e-15));
  SECTION("d=7 example point, cross-checked against an eta grid") {
    const double bound = restricted_bound(0.1, 0.2, 7);
    REQUIRE(bound == Approx(2.021901120523874).margin(1e-12));
    double grid_max = -1e300;
    for (int a = 0; a < 400; ++a)
      for (int b = 0; b < 400; ++b) {
        const double e1 = -PI / 2 + PI * a / 399;
        const double e2 = -PI / 2 + PI * b / 399;
        grid_max = std::max(grid_max, id_closed_form(0.1, 0.2, e1, e2, 7));
      }
    REQUIRE(grid_max <= bound + 1e-9);
    REQUIRE(grid_max >= bound - 1e-3);  // coarse grid gets close from below
  }
  SECTION("attained at the stationary angles, never exceeded on a fine grid") {
    SplitMix64 rng(4);
    for (int d : {2, 3, 4, 5}) {
      for (int i = 0; i < 100; ++i) {
        const double t1 = rng.uniform(0, PI / 2);
        const double t2 = d == 2 ? 0.0 : rng.uniform(0, PI / 2);
        const auto eta = optimal_eta(t1);
        const double bound = restricted_bound(t1, t2, d);
        REQUIRE(std::abs(closed_form_value(d, t1, t2, eta.eta1, eta.eta2) -
                         bound) <= 1e-12);
      }
      // exceedance sweep on a 400^2 grid for a handful of states
      for (int i = 0; i < 4; ++i) {
        const double t1 = rng.uniform(0, PI / 2);
        const double t2 = d == 2 ? 0.0 : rng.uniform(0, PI / 2);
        const double bound = restricted_bound(t1, t2, d);
        double exceed = -1e300;
        for (int a = 0; a < 400; ++a)
          for (int b = 0; b < 400; ++b) {
            const double e1 = -PI / 2 + PI * a / 399;
            const double e2 = -PI / 2 + PI * b / 399;
            exceed = std::max(exceed, closed_form_value(d, t1, t2, e1, e2) - bound);
          }
        REQUIRE(exceed <= 1e-9);
      }
    }
  }
  SECTION("strictly above 2 away from the product boundary") {
    SplitMix64 rng(6);
    for (int d : {2, 3, 4, 5, 7}) {
      const double floor_margin =
          restricted_margin(0.05, d == 2 ? 0.0 : PI / 2 - 0.05, d);
      REQUIRE(floor_margin > 0.0);
      for (int i = 0; i < 1000; ++i) {
        const double t1 = rng.uniform(0.05, PI / 2 - 0.05);
        const double t2 = d == 2 ? 0.0 : rng.uniform(0, PI / 2 - 0.05);
        const double margin = restricted_margin(t1, t2, d);
        REQUIRE(margin >= floor_margin - 1e-15);
        REQUIRE(restricted_bound(t1, t2, d) > 2.0);
      }
    }
  }
  SECTION("margin formula is consistent with the bound") {
    SplitMix64 rng(8);
    for (int i = 0; i < 200; ++i) {
      const int d = 2 + static_cast<int>(rng.next() % 5);
      const double t1 = rng.uniform(0, PI / 2), t2 = rng.uniform(0, PI / 2);
      const double via_bound = restricted_bound(t1, d == 2 ? 0 : t2, d) - 2.0;
      REQUIRE(restricted_margin(t1, t2, d) == Approx(via_bound).margin(1e-12));
    }
  }
}

TEST_CASE("optimal eta") {
  SECTION("flat at theta1 = 0") {
    auto eta = optimal_eta(0);
    REQUIRE(eta.eta1 == 0.0);
    REQUIRE(eta.eta2 == 0.0);
    REQUIRE(i2_closed_form(0, eta.eta1, eta.eta2) == 2.0);
  }
  SECTION("pi/4 gives -pi/8, pi/8") {
    auto eta = optimal_eta(PI / 4);
    REQUIRE(eta.eta1 == Approx(-PI / 8).margin(1e-15));
    REQUIRE(eta.eta2 == Approx(PI / 8).margin(1e-15));
    REQUIRE(i2_closed_form(PI / 4, eta.eta1, eta.eta2) ==
            Approx(2 * std::sqrt(2.0)).margin(1e-15));
  }
  SECTION("pi/6 attains the bound") {
    auto eta = optimal_eta(PI / 6);
    REQUIRE(eta.eta2 ==
            Approx(0.5 * std::atan(std::sqrt(3.0) / 2)).margin(1e-15));
    REQUIRE(std::abs(i2_closed_form(PI / 6, eta.eta1, eta.eta2) -
                     restricted_bound(PI / 6, 0, 2)) <= 1e-12);
  }
  SECTION("the full-angle variant does not maximize") {
    auto lit = literal_optimal_eta(PI / 4);
    REQUIRE(lit.eta1 == Approx(-PI / 4).margin(1e-15));
    REQUIRE(i2_closed_form(PI / 4, lit.eta1, lit.eta2) ==
            Approx(2.0).margin(1e-12));
  }
}

TEST_CASE("empirical power-sum fit") {
  SECTION("sweep caption spot value") {
    auto k = kappa_from_beta_xi({PI / 6, 2 * PI / 15});
    REQUIRE(empirical_i3_rough(k[0], k[1], k[2]) ==
            Approx(2.5366).margin(5e-4));
  }
  SECTION("concentrated kappa gives the coefficient sum") {
    REQUIRE(empirical_i3_rough(1, 0, 0) ==
            Approx(0.5491 + 0.9344 + 2.5871 - 2.0636).margin(1e-12));
    REQUIRE(empirical_i3_rough(1, 0, 0) == Approx(2.0070).margin(1e-10));
  }
  SECTION("uniform kappa lands near the full-search value") {
    const double r3 = 1 / std::sqrt(3.0);
    REQUIRE(empirical_i3_rough(r3, r3, r3) == Approx(2.8729).margin(0.05));
  }
  SECTION("symmetric under permutations of kappa") {
    SplitMix64 rng(12);
    for (int i = 0; i < 100; ++i) {
      auto k = sample_simplex_kappa(3, rng);
      std::sort(k.begin(), k.end());
      const double base = empirical_i3_rough(k[0], k[1], k[2]);
      do {
        REQUIRE(empirical_i3_rough(k[0], k[1], k[2]) ==
                Approx(base).margin(1e-12));
      } while (std::next_permutation(k.begin(), k.end()));
    }
  }
  SECTION("rejects non-normalized kappa") {
    REQUIRE_THROWS_AS(empirical_i3_rough(1, 1, 1), std::invalid_argument);
  }
}
