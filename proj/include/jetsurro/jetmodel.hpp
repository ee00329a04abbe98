#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "jetsurro/jetphys.hpp"

namespace jetsurro::plume {

/// Top-hat state at one arc-length station along the centerline.
struct PlumeState {
  double s;    ///< arc length, m
  double x;    ///< horizontal position, m
  double z;    ///< vertical position, m (nozzle tip = 0)
  double q;    ///< local volume flux, m^3/s
  double m_h;  ///< horizontal momentum flux, m^4/s^2 (conserved)
  double m_v;  ///< vertical momentum flux, m^4/s^2
  double b;    ///< top-hat half-width, m
  double c;    ///< centerline concentration fraction q0/q, in (0, 1]
};

struct Centerline {
  std::vector<PlumeState> samples;
};

struct IntegratorConfig {
  double step_factor = 0.1;       ///< RK4 step = step_factor * d
  double s_max_factor = 200.0;    ///< arc-length budget = factor * d * Fr
  bool boundary_closures = true;  ///< shallow-water / Coanda output adjustments
  double noise_sigma = 0.02;      ///< lognormal sigma when a noise seed is given
};

/// Entrainment blend limits (jet and plume values from the integral-model
/// literature). The blend rule is this module's closure:
///   alpha = a_j + (a_p - a_j) * clamp(|sin phi| / Fr_loc^2, 0, 1)
/// with Fr_loc^2 = u^2 / (g0p_local * b).
inline constexpr double kAlphaJet = 0.057;
inline constexpr double kAlphaPlume = 0.085;

/// Integrates the top-hat system with classical fixed-step RK4 from the
/// nozzle until the centerline drops below the bed (z < -h_p). Throws
/// DivergenceError if the arc-length budget is exhausted first and
/// NumericError on non-finite state.
Centerline integrate(const phys::JetCase& c, const IntegratorConfig& config = {});

/// Reads the five characteristic coordinates off a centerline:
/// peak by quadratic interpolation, terminal rise via the 5% Gaussian
/// radius z_t = z_m + b_peak * sqrt(ln 20), return/impact points by linear
/// interpolation of the descending z = 0 and z = -h_p crossings.
phys::JetGeometry extract_geometry(const Centerline& line, const phys::JetCase& c);

struct OracleResult {
  phys::JetGeometry geometry;
  bool surface_clamped = false;   ///< z_t proxy exceeded H
  bool coanda_stretched = false;  ///< h_p/L_M < 0.2 horizontal stretch applied
};

/// integrate + extract_geometry + boundary closures, optionally followed by
/// multiplicative lognormal noise (deterministic per seed) standing in for
/// CFD time-averaging scatter.
OracleResult oracle_full(const phys::JetCase& c,
                         std::optional<std::uint64_t> noise_seed = std::nullopt,
                         const IntegratorConfig& config = {});

phys::JetGeometry oracle(const phys::JetCase& c,
                         std::optional<std::uint64_t> noise_seed = std::nullopt,
                         const IntegratorConfig& config = {});

/// CSV dump, header: s,x,z,q,m_h,m_v,b,c
void write_centerline_csv(const Centerline& line, std::ostream& out);

}  // namespace jetsurro::plume
