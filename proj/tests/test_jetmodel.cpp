#include <doctest.h>

#include <cmath>
#include <sstream>

#include "jetsurro/jetmodel.hpp"
#include "jetsurro/rng.hpp"

using namespace jetsurro;
using namespace jetsurro::plume;

namespace {

const phys::JetCase kValidationCase{45.0, 0.07, 0.15, 0.0058, 0.515, 1034.0, 997.0};

// Synthetic centerline tracing z(x) = 1 - (x - 2)^2 with constant half-width.
Centerline parabola_centerline(double b, double x0, double x1, double dx) {
  Centerline line;
  for (double x = x0; x <= x1; x += dx) {
    PlumeState p{};
    p.s = x;
    p.x = x;
    p.z = 1.0 - (x - 2.0) * (x - 2.0);
    p.q = 1.0 + x;
    p.m_h = 1.0;
    p.m_v = 0.0;
    p.b = b;
    p.c = 1.0 / (1.0 + x);
    line.samples.push_back(p);
  }
  return line;
}

phys::JetCase dummy_case(double h_p) {
  return {45.0, h_p, 2.0 * h_p + 1.0, 0.01, 1.0, 1030.0, 1000.0};
}

}  // namespace

TEST_CASE("initial state matches the discharge conditions") {
  const Centerline line = integrate(kValidationCase);
  const PlumeState& p0 = line.samples.front();
  const auto dq = phys::derive(kValidationCase);
  CHECK(p0.s == 0.0);
  CHECK(p0.x == 0.0);
  CHECK(p0.z == 0.0);
  CHECK(p0.q == doctest::Approx(dq.Q).epsilon(1e-14));
  CHECK(p0.m_h == doctest::Approx(dq.M * std::cos(M_PI / 4.0)).epsilon(1e-14));
  CHECK(p0.m_v == doctest::Approx(dq.M * std::sin(M_PI / 4.0)).epsilon(1e-14));
  CHECK(p0.b == doctest::Approx(kValidationCase.d / 2.0).epsilon(1e-12));
  CHECK(p0.c == 1.0);
}

TEST_CASE("horizontal momentum is conserved to termination") {
  const Centerline line = integrate(kValidationCase);
  const double m0 = line.samples.front().m_h;
  CHECK(std::abs(line.samples.back().m_h - m0) <= 1e-8 * std::abs(m0));
}

TEST_CASE("centerline is monotone in x with increasing dilution") {
  const Centerline line = integrate(kValidationCase);
  for (std::size_t i = 1; i < line.samples.size(); ++i) {
    CHECK(line.samples[i].x > line.samples[i - 1].x);
    CHECK(line.samples[i].q > line.samples[i - 1].q);
    CHECK(line.samples[i].c <= 1.0);
  }
}

TEST_CASE("validation-like case lands in the dimensionless peak bracket") {
  const auto dq = phys::derive(kValidationCase);
  const auto g = extract_geometry(integrate(kValidationCase), kValidationCase);
  const double scale = kValidationCase.d * dq.Fr;
  CHECK(g.x_m / scale >= 1.5);
  CHECK(g.x_m / scale <= 3.5);
}

TEST_CASE("extract_geometry on a closed-form parabola") {
  const phys::JetCase c = dummy_case(1.0);

  SUBCASE("zero half-width") {
    const auto g = extract_geometry(parabola_centerline(0.0, 0.9, 3.45, 1e-3), c);
    CHECK(g.x_m == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(g.z_m == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.z_t == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.x_r == doctest::Approx(3.0).epsilon(1e-5));
    CHECK(g.x_i == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-5));
  }

  SUBCASE("constant half-width adds the 5% Gaussian edge") {
    const auto g = extract_geometry(parabola_centerline(0.5, 0.9, 3.45, 1e-3), c);
    CHECK(g.z_t == doctest::Approx(1.0 + 0.5 * std::sqrt(std::log(20.0))).epsilon(1e-9));
  }
}

TEST_CASE("extract_geometry error paths") {
  const phys::JetCase c = dummy_case(1.0);
  Centerline one;
  one.samples.push_back({0, 0, 0, 1, 1, 0, 0.1, 1});
  CHECK_THROWS_AS(extract_geometry(one, c), ShapeError);

  // strictly rising line has no interior maximum
  Centerline rising;
  for (double x = 0.0; x < 1.0; x += 0.1)
    rising.samples.push_back({x, x, x, 1 + x, 1, 0, 0.1, 1});
  CHECK_THROWS_AS(extract_geometry(rising, c), ShapeError);

  // peak present but never returns to z = 0
  Centerline truncated;
  for (double x = 0.0; x < 1.0; x += 0.01)
    truncated.samples.push_back(
        {x, x, 0.5 - 0.1 * (x - 0.5) * (x - 0.5), 1 + x, 1, 0, 0.1, 1});
  CHECK_THROWS_AS(extract_geometry(truncated, c), TruncationError);
}

TEST_CASE("geometry ordering invariants on random cases") {
  Rng rng(99);
  int checked = 0;
  while (checked < 15) {
    phys::JetCase c;
    c.theta = rng.uniform(10.0, 75.0);
    c.d = rng.uniform(0.005, 0.3);
    c.U0 = rng.uniform(0.3, 3.0);
    c.rho_b = rng.uniform(1010.0, 1059.0);
    c.rho_a = rng.uniform(980.0, 1005.0);
    c.h_p = rng.uniform(0.1, 1.5);
    c.H = rng.uniform(2.0 * c.h_p, 9.8);
    if (c.H < 2.0 * c.h_p) continue;
    const auto g = extract_geometry(integrate(c), c);
    CHECK(g.x_m > 0.0);
    CHECK(g.z_m > 0.0);
    CHECK(g.x_m <= g.x_r);
    CHECK(g.x_r <= g.x_i);
    CHECK(g.z_m <= g.z_t);
    ++checked;
  }
}

TEST_CASE("oracle determinism") {
  const auto a = oracle(kValidationCase, 42);
  const auto b = oracle(kValidationCase, 42);
  CHECK(a.x_m == b.x_m);
  CHECK(a.z_m == b.z_m);
  CHECK(a.z_t == b.z_t);
  CHECK(a.x_r == b.x_r);
  CHECK(a.x_i == b.x_i);

  const auto c = oracle(kValidationCase);
  const auto d = oracle(kValidationCase);
  CHECK(c.x_m == d.x_m);
  CHECK(c.x_i == d.x_i);

  const auto e = oracle(kValidationCase, 43);
  CHECK(e.x_m != a.x_m);
}

TEST_CASE("lognormal noise stays within 10% at sigma 0.02") {
  const auto clean = oracle(kValidationCase);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto noisy = oracle(kValidationCase, seed);
    CHECK(std::abs(noisy.x_m / clean.x_m - 1.0) < 0.10);
    CHECK(std::abs(noisy.z_m / clean.z_m - 1.0) < 0.10);
    CHECK(std::abs(noisy.z_t / clean.z_t - 1.0) < 0.10);
    CHECK(std::abs(noisy.x_r / clean.x_r - 1.0) < 0.10);
    CHECK(std::abs(noisy.x_i / clean.x_i - 1.0) < 0.10);
  }
}

TEST_CASE("self-similar collapse under d*Fr scaling at fixed theta and Fr") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const double theta = rng.uniform(8.0, 78.0);
    phys::JetCase a{theta, 0.0, 0.0, 0.004, 0.6, 1030.0, 1000.0};
    const auto base = phys::derive(
        phys::JetCase{theta, 1.0, 2.0, a.d, a.U0, a.rho_b, a.rho_a});
    a.h_p = 5.0 * base.L_M;
    a.H = 20.0 * base.L_M;
    phys::JetCase b = a;
    b.d *= 10.0;
    b.U0 *= std::sqrt(10.0);  // keeps Fr fixed, scales d*Fr by 10
    b.h_p *= 10.0;
    b.H *= 10.0;
    const auto ga = oracle(a);
    const auto gb = oracle(b);
    const double sa = a.d * phys::derive(a).Fr;
    const double sb = b.d * phys::derive(b).Fr;
    CHECK(std::abs(ga.x_m / sa - gb.x_m / sb) < 0.02 * (ga.x_m / sa));
    CHECK(std::abs(ga.z_m / sa - gb.z_m / sb) < 0.02 * (ga.z_m / sa));
    CHECK(std::abs(ga.z_t / sa - gb.z_t / sb) < 0.02 * (ga.z_t / sa));
    CHECK(std::abs(ga.x_r / sa - gb.x_r / sb) < 0.02 * (ga.x_r / sa));
  }
}

TEST_CASE("increasing discharge velocity grows every output") {
  Rng rng(17);
  int checked = 0;
  while (checked < 10) {
    phys::JetCase c;
    c.theta = rng.uniform(10.0, 70.0);
    c.d = rng.uniform(0.005, 0.2);
    c.U0 = rng.uniform(0.3, 2.0);
    c.rho_b = rng.uniform(1015.0, 1059.0);
    c.rho_a = rng.uniform(980.0, 1005.0);
    c.h_p = rng.uniform(0.2, 1.0);
    c.H = 50.0;  // keep the surface far so the z_t clamp stays inactive
    phys::JetCase faster = c;
    faster.U0 *= 1.2;
    const auto full_a = oracle_full(c);
    const auto full_b = oracle_full(faster);
    if (full_a.surface_clamped || full_b.surface_clamped) continue;
    CHECK(full_b.geometry.x_m > full_a.geometry.x_m);
    CHECK(full_b.geometry.z_m > full_a.geometry.z_m);
    CHECK(full_b.geometry.z_t > full_a.geometry.z_t);
    CHECK(full_b.geometry.x_r > full_a.geometry.x_r);
    CHECK(full_b.geometry.x_i > full_a.geometry.x_i);
    ++checked;
  }
}

TEST_CASE("peak height rises with inclination at fixed Froude number") {
  double previous = 0.0;
  for (double theta : {5.0, 15.0, 25.0, 35.0, 45.0, 55.0, 65.0, 75.0, 80.0}) {
    const phys::JetCase c{theta, 0.5, 8.0, 0.0058, 0.515, 1034.0, 997.0};
    const auto g = extract_geometry(integrate(c), c);
    CHECK(g.z_m > previous);
    previous = g.z_m;
  }
}

TEST_CASE("halving the step changes outputs by less than 0.1%") {
  IntegratorConfig half;
  half.step_factor = 0.05;
  Rng rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    phys::JetCase c = kValidationCase;
    if (trial > 0) {
      c.theta = rng.uniform(20.0, 70.0);
      c.U0 = rng.uniform(0.4, 1.2);
      c.h_p = rng.uniform(0.05, 0.3);
      c.H = rng.uniform(2.0 * c.h_p + 0.5, 5.0);
    }
    const auto coarse = extract_geometry(integrate(c), c);
    const auto fine = extract_geometry(integrate(c, half), c);
    CHECK(std::abs(coarse.x_m / fine.x_m - 1.0) < 1e-3);
    CHECK(std::abs(coarse.z_m / fine.z_m - 1.0) < 1e-3);
    CHECK(std::abs(coarse.z_t / fine.z_t - 1.0) < 1e-3);
    CHECK(std::abs(coarse.x_r / fine.x_r - 1.0) < 1e-3);
    CHECK(std::abs(coarse.x_i / fine.x_i - 1.0) < 1e-3);
  }
}

TEST_CASE("weak jet with a distant bed exhausts the arc budget") {
  const phys::JetCase weak{45.0, 5.0, 10.0, 0.002, 0.06, 1059.0, 980.0};
  CHECK_THROWS_AS(integrate(weak), DivergenceError);
}

TEST_CASE("boundary closures") {
  SUBCASE("surface clamp caps z_t at the water depth") {
    // H barely above twice the port height, strong jet: rise exceeds H
    const phys::JetCase c{60.0, 0.05, 0.11, 0.01, 2.0, 1030.0, 1000.0};
    const auto full = oracle_full(c);
    CHECK(full.surface_clamped);
    CHECK(full.geometry.z_t == doctest::Approx(c.H));
    CHECK(full.geometry.z_m <= c.H);

    IntegratorConfig open;
    open.boundary_closures = false;
    const auto raw = oracle_full(c, std::nullopt, open);
    CHECK_FALSE(raw.surface_clamped);
    CHECK(raw.geometry.z_t > c.H);
  }

  SUBCASE("coanda proximity stretches only the horizontal returns") {
    phys::JetCase c{45.0, 0.07, 8.0, 0.0058, 0.515, 1034.0, 997.0};
    const auto dq = phys::derive(c);
    c.h_p = 0.05 * dq.L_M;  // well inside the Coanda regime
    const auto with = oracle_full(c);
    IntegratorConfig open;
    open.boundary_closures = false;
    const auto without = oracle_full(c, std::nullopt, open);
    CHECK(with.coanda_stretched);
    CHECK(with.geometry.x_r > without.geometry.x_r);
    CHECK(with.geometry.x_i > without.geometry.x_i);
    CHECK(with.geometry.z_m == doctest::Approx(without.geometry.z_m));
    CHECK(with.geometry.z_t == doctest::Approx(without.geometry.z_t));
    CHECK(with.geometry.x_m == doctest::Approx(without.geometry.x_m));
  }
}

TEST_CASE("centerline CSV carries the documented header") {
  Centerline line = parabola_centerline(0.1, 1.0, 3.0, 0.5);
  std::ostringstream out;
  write_centerline_csv(line, out);
  CHECK(out.str().rfind("s,x,z,q,m_h,m_v,b,c\n", 0) == 0);
}
