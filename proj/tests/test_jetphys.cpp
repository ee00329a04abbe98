#include <doctest.h>

#include <cmath>

#include "jetsurro/jetphys.hpp"
#include "jetsurro/rng.hpp"

using namespace jetsurro;
using namespace jetsurro::phys;

namespace {
const JetCase kValidationCase{45.0, 0.07, 0.15, 0.0058, 0.515, 1034.0, 997.0};
}

TEST_CASE("reduced gravity") {
  CHECK(reduced_gravity(1034.0, 997.0) == doctest::Approx(0.36406).epsilon(1e-4));
  CHECK(reduced_gravity(1000.0, 1000.0) == 0.0);
  CHECK(reduced_gravity(1059.0, 980.0) ==
        doctest::Approx(9.81 * 79.0 / 980.0).epsilon(1e-12));
  CHECK_THROWS_AS(reduced_gravity(1000.0, 0.0), DomainError);
  CHECK_THROWS_AS(reduced_gravity(1000.0, -5.0), DomainError);
}

TEST_CASE("froude number") {
  CHECK(froude(0.515, 0.36406, 0.0058) == doctest::Approx(11.207).epsilon(1e-4));
  CHECK(froude(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(froude(0.515, 0.0, 0.0058), DomainError);
}

TEST_CASE("froude is homogeneous in U0") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double u0 = rng.uniform(0.05, 5.0);
    const double g0p = rng.uniform(0.01, 0.8);
    const double d = rng.uniform(0.002, 0.4);
    const double k = rng.uniform(0.1, 10.0);
    CHECK(froude(k * u0, g0p, d) ==
          doctest::Approx(k * froude(u0, g0p, d)).epsilon(1e-12));
  }
}

TEST_CASE("momentum-buoyancy length scale") {
  CHECK(length_scale(0.0058, 11.207) == doctest::Approx(0.06119).epsilon(1e-3));
  CHECK(length_scale(1.0, 1.0) == doctest::Approx(std::pow(M_PI / 4.0, 0.25)));
  CHECK(length_scale(0.002, 1.0) == doctest::Approx(0.0018827).epsilon(1e-4));
}

TEST_CASE("length scale identity holds for derived cases") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    JetCase c;
    c.theta = rng.uniform(5.0, 80.0);
    c.h_p = rng.uniform(0.02, 2.0);
    c.H = rng.uniform(2.0 * c.h_p, 9.8 + 2.0 * c.h_p);
    c.d = rng.uniform(0.002, 0.39);
    c.U0 = rng.uniform(0.059, 4.96);
    c.rho_b = rng.uniform(1000.0, 1059.0);
    c.rho_a = rng.uniform(980.0, std::min(1030.0, c.rho_b - 0.1));
    const DerivedQuantities q = derive(c);
    CHECK(q.L_M ==
          doctest::Approx(std::pow(M_PI / 4.0, 0.25) * c.d * q.Fr).epsilon(1e-12));
  }
}

TEST_CASE("derive populates the validation-case chain") {
  const DerivedQuantities q = derive(kValidationCase);
  CHECK(q.Fr == doctest::Approx(11.207).epsilon(1e-4));
  CHECK(q.L_M == doctest::Approx(0.06119).epsilon(2e-3));
  CHECK(q.coanda_ratio == doctest::Approx(1.144).epsilon(1e-3));
  CHECK(q.shallow_ratio == doctest::Approx(0.4334).epsilon(1e-3));
  CHECK(q.Q == doctest::Approx(M_PI * 0.0058 * 0.0058 * 0.515 / 4.0).epsilon(1e-12));
  CHECK(q.M == doctest::Approx(0.515 * q.Q).epsilon(1e-12));
  CHECK(q.B == doctest::Approx(q.g0p * q.Q).epsilon(1e-12));
}

TEST_CASE("derive is deterministic") {
  const DerivedQuantities a = derive(kValidationCase);
  const DerivedQuantities b = derive(kValidationCase);
  CHECK(a.g0p == b.g0p);
  CHECK(a.Fr == b.Fr);
  CHECK(a.L_M == b.L_M);
  CHECK(a.coanda_ratio == b.coanda_ratio);
  CHECK(a.shallow_ratio == b.shallow_ratio);
}

TEST_CASE("derive rejects invariant violations by name") {
  JetCase c = kValidationCase;
  c.rho_b = c.rho_a;
  CHECK_THROWS_WITH_AS(derive(c), doctest::Contains("rho_b"), ValidationError);

  c = kValidationCase;
  c.H = 2.0 * c.h_p;  // boundary is inclusive
  CHECK_NOTHROW(derive(c));
  c.H = 2.0 * c.h_p - 1e-9;
  CHECK_THROWS_AS(derive(c), ValidationError);

  c = kValidationCase;
  c.theta = 90.0;
  CHECK_THROWS_AS(derive(c), ValidationError);
  c.theta = 0.0;
  CHECK_THROWS_AS(derive(c), ValidationError);
}

TEST_CASE("gci reproduces the reference three-mesh study") {
  // z_m rows of the three-mesh study
  const GciResult zm = gci(0.0639, 0.07153, 0.07315, 1.3);
  CHECK(std::abs(zm.gci_mf - 0.00746) < 1e-4);
  CHECK(zm.asymptotic == doctest::Approx(1.0).epsilon(0.1));

  const GciResult xm = gci(0.11197, 0.11893, 0.12236, 1.3);
  CHECK(std::abs(xm.gci_mf - 0.0340) < 5e-4);

  // observed order on the x_m sequence: ln(0.00696/0.00343)/ln(1.3)
  CHECK(xm.p == doctest::Approx(std::log(0.00696 / 0.00343) / std::log(1.3))
                    .epsilon(1e-9));
}

TEST_CASE("gci degenerate and oscillatory sequences") {
  CHECK_THROWS_AS(gci(1.0, 2.0, 3.0, 2.0), DegenerateError);  // p = 0, r^p = 1
  CHECK_THROWS_AS(gci(1.0, 2.0, 1.5, 1.3), ConvergenceError);
  CHECK_THROWS_AS(gci(1.0, 1.0, 2.0, 1.3), DegenerateError);
  CHECK_THROWS_AS(gci(1.0, 2.0, 2.0, 1.3), DegenerateError);
  CHECK_THROWS_AS(gci(1.0, 2.0, 2.5, 1.0), DomainError);
}
