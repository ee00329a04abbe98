#include "jetsurro/jetmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "jetsurro/numfmt.hpp"
#include "jetsurro/rng.hpp"

namespace jetsurro::plume {

namespace {

// State vector layout for the RK4 stages.
struct State {
  double q, m_h, m_v, x, z;
};

State operator+(const State& a, const State& b) {
  return {a.q + b.q, a.m_h + b.m_h, a.m_v + b.m_v, a.x + b.x, a.z + b.z};
}
State operator*(double k, const State& a) {
  return {k * a.q, k * a.m_h, k * a.m_v, k * a.x, k * a.z};
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Top-hat relations: u = |m|/q, q = pi b^2 u  =>  b = q / sqrt(pi |m|).
State derivatives(const State& v, double g0p, double q0) {
  const double mom = std::hypot(v.m_h, v.m_v);
  const double u = mom / v.q;
  const double b = v.q / std::sqrt(M_PI * mom);
  const double sin_phi = v.m_v / mom;
  const double cos_phi = v.m_h / mom;
  const double g_local = g0p * q0 / v.q;  // buoyancy flux conservation
  const double fr_loc_sq = u * u / (g_local * b);
  const double alpha =
      kAlphaJet + (kAlphaPlume - kAlphaJet) * clamp01(std::abs(sin_phi) / fr_loc_sq);
  State d;
  d.q = 2.0 * M_PI * b * alpha * u;
  d.m_h = 0.0;
  d.m_v = -g_local * M_PI * b * b;
  d.x = cos_phi;
  d.z = sin_phi;
  return d;
}

PlumeState sample_of(const State& v, double s, double q0) {
  const double mom = std::hypot(v.m_h, v.m_v);
  PlumeState p;
  p.s = s;
  p.x = v.x;
  p.z = v.z;
  p.q = v.q;
  p.m_h = v.m_h;
  p.m_v = v.m_v;
  p.b = v.q / std::sqrt(M_PI * mom);
  p.c = q0 / v.q;
  return p;
}

bool finite(const State& v) {
  return std::isfinite(v.q) && std::isfinite(v.m_h) && std::isfinite(v.m_v) &&
         std::isfinite(v.x) && std::isfinite(v.z);
}

// Vertex of the parabola through three (x, z) samples. Falls back to the
// middle point when the fit is not concave.
struct Peak {
  double x, z;
};
Peak parabola_peak(double x0, double z0, double x1, double z1, double x2, double z2) {
  const double d0 = x0 - x1, d2 = x2 - x1;
  // z(x) = a (x-x1)^2 + b (x-x1) + z1
  const double det = d0 * d2 * (d0 - d2);
  const double a = ((z0 - z1) * d2 - (z2 - z1) * d0) / det;
  const double b = ((z2 - z1) * d0 * d0 - (z0 - z1) * d2 * d2) / det;
  if (!(a < 0.0)) return {x1, z1};
  const double dx = -b / (2.0 * a);
  return {x1 + dx, z1 + b * dx + a * dx * dx};
}

double parabola_at(double x0, double y0, double x1, double y1, double x2, double y2,
                   double x) {
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  return y0 * l0 + y1 * l1 + y2 * l2;
}

}  // namespace

Centerline integrate(const phys::JetCase& c, const IntegratorConfig& config) {
  const phys::DerivedQuantities dq = phys::derive(c);
  const double theta_rad = c.theta * M_PI / 180.0;
  const double q0 = dq.Q;

  State v;
  v.q = q0;
  v.m_h = dq.M * std::cos(theta_rad);
  v.m_v = dq.M * std::sin(theta_rad);
  v.x = 0.0;
  v.z = 0.0;

  const double ds = config.step_factor * c.d;
  const double s_max = config.s_max_factor * c.d * dq.Fr;
  const std::size_t max_steps = static_cast<std::size_t>(std::ceil(s_max / ds)) + 1;
  // Very high Froude numbers imply millions of steps; thin the stored samples
  // to bound memory while keeping the trajectory densely resolved.
  const std::size_t stride = std::max<std::size_t>(1, max_steps / 200000);

  Centerline line;
  line.samples.reserve(std::min<std::size_t>(max_steps, 200002));
  line.samples.push_back(sample_of(v, 0.0, q0));

  double s = 0.0;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    const State k1 = derivatives(v, dq.g0p, q0);
    const State k2 = derivatives(v + (0.5 * ds) * k1, dq.g0p, q0);
    const State k3 = derivatives(v + (0.5 * ds) * k2, dq.g0p, q0);
    const State k4 = derivatives(v + ds * k3, dq.g0p, q0);
    const State prev = v;
    v = v + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += ds;

    if (!finite(v)) throw NumericError("integrate: non-finite state at s = " + fmt_double(s));
    if (!(v.q > prev.q))
      throw NumericError("integrate: volume flux not increasing at s = " + fmt_double(s));

    const bool hit_bed = v.z < -c.h_p;
    if (step % stride == 0 || hit_bed) line.samples.push_back(sample_of(v, s, q0));
    if (hit_bed) return line;
    if (s > s_max) break;
  }
  throw DivergenceError("integrate: no bed impact within s_max = " + fmt_double(s_max));
}

phys::JetGeometry extract_geometry(const Centerline& line, const phys::JetCase& c) {
  const auto& p = line.samples;
  if (p.size() < 2) throw ShapeError("extract_geometry: centerline needs >= 2 samples");

  std::size_t im = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].z > p[im].z) im = i;
  if (im == 0 || im + 1 == p.size())
    throw ShapeError("extract_geometry: no interior centerline maximum");

  const auto& a = p[im - 1];
  const auto& m = p[im];
  const auto& b = p[im + 1];
  const Peak peak = parabola_peak(a.x, a.z, m.x, m.z, b.x, b.z);
  const double b_peak = parabola_at(a.x, a.b, m.x, m.b, b.x, b.b, peak.x);

  phys::JetGeometry g;
  g.x_m = peak.x;
  g.z_m = peak.z;
  g.z_t = peak.z + b_peak * std::sqrt(std::log(20.0));  // 5% Gaussian edge

  auto descending_crossing = [&](double level, std::size_t from) -> std::pair<double, std::size_t> {
    for (std::size_t i = from; i + 1 < p.size(); ++i) {
      if (p[i].z >= level && p[i + 1].z < level) {
        const double t = (p[i].z - level) / (p[i].z - p[i + 1].z);
        return {p[i].x + t * (p[i + 1].x - p[i].x), i};
      }
    }
    throw TruncationError("extract_geometry: no descending crossing at z = " +
                          fmt_double(level));
  };

  const auto [xr, ir] = descending_crossing(0.0, im);
  const auto [xi, ii] = descending_crossing(-c.h_p, ir);
  g.x_r = xr;
  g.x_i = xi;
  return g;
}

OracleResult oracle_full(const phys::JetCase& c, std::optional<std::uint64_t> noise_seed,
                         const IntegratorConfig& config) {
  const phys::DerivedQuantities dq = phys::derive(c);
  OracleResult out;
  out.geometry = extract_geometry(integrate(c, config), c);
  phys::JetGeometry& g = out.geometry;

  if (config.boundary_closures) {
    // Surface attachment: clamp the rise proxies at the free surface and
    // translate horizontal coordinates downstream. The stretch is continuous
    // in the shallow ratio (factor 1 below the 45-degree threshold).
    const double stretch = 1.0 + 0.3 * clamp01(dq.shallow_ratio - 0.65);
    g.x_m *= stretch;
    g.x_r *= stretch;
    g.x_i *= stretch;
    if (g.z_t > c.H) {
      g.z_t = c.H;
      g.z_m = std::min(g.z_m, c.H);  // centerline cannot exceed the surface
      out.surface_clamped = true;
    }
    // Bed proximity: reduced entrainment pushes the horizontal returns
    // downstream, vertical coordinates untouched.
    if (dq.coanda_ratio < 0.2) {
      const double cs = 1.0 + 0.2 * (0.2 - dq.coanda_ratio) / 0.2;
      g.x_r *= cs;
      g.x_i *= cs;
      out.coanda_stretched = true;
    }
  }

  if (noise_seed) {
    Rng rng(*noise_seed);
    for (double* y : {&g.x_m, &g.z_m, &g.z_t, &g.x_r, &g.x_i})
      *y *= std::exp(config.noise_sigma * rng.normal());
  }
  return out;
}

phys::JetGeometry oracle(const phys::JetCase& c, std::optional<std::uint64_t> noise_seed,
                         const IntegratorConfig& config) {
  return oracle_full(c, noise_seed, config).geometry;
}

void write_centerline_csv(const Centerline& line, std::ostream& out) {
  out << "s,x,z,q,m_h,m_v,b,c\n";
  for (const auto& p : line.samples) {
    out << fmt_double(p.s) << ',' << fmt_double(p.x) << ',' << fmt_double(p.z) << ','
        << fmt_double(p.q) << ',' << fmt_double(p.m_h) << ',' << fmt_double(p.m_v)
        << ',' << fmt_double(p.b) << ',' << fmt_double(p.c) << '\n';
  }
}

}  // namespace jetsurro::plume
