#pragma once

#include <string>

#include "jetsurro/errors.hpp"

namespace jetsurro::phys {

inline constexpr double kGravity = 9.81;  // m/s^2

/// Discharge/ambient parameters of one scenario.
struct JetCase {
  double theta;  ///< discharge inclination, degrees, in (0, 90)
  double h_p;    ///< port height above bed, m
  double H;      ///< water depth above nozzle tip, m
  double d;      ///< nozzle diameter, m
  double U0;     ///< discharge velocity, m/s
  double rho_b;  ///< brine density, kg/m^3
  double rho_a;  ///< ambient density, kg/m^3

  /// Throws ValidationError naming the first violated constraint.
  void validate() const;

  friend bool operator==(const JetCase&, const JetCase&) = default;
  /// Lexicographic order over all seven fields; used for dedup and
  /// canonical row ordering.
  friend auto operator<=>(const JetCase&, const JetCase&) = default;
};

/// Quantities derived from a JetCase: fluxes, Froude number, momentum
/// length scale and the two boundary-proximity ratios.
struct DerivedQuantities {
  double g0p;            ///< reduced gravity, m/s^2
  double Q;              ///< volume flux, m^3/s
  double M;              ///< momentum flux, m^4/s^2
  double B;              ///< buoyancy flux, m^4/s^3
  double Fr;             ///< densimetric Froude number
  double L_M;            ///< momentum-buoyancy length scale, m
  double coanda_ratio;   ///< h_p / L_M
  double shallow_ratio;  ///< d*Fr / H
};

/// Five characteristic coordinates of a jet trajectory.
struct JetGeometry {
  double x_m;  ///< horizontal centerline-peak location, m
  double z_m;  ///< vertical centerline-peak location, m
  double z_t;  ///< terminal rise height, m
  double x_r;  ///< return-point horizontal location, m
  double x_i;  ///< impact-point horizontal location, m
};

/// g * |rho_b - rho_a| / rho_a. Throws DomainError for rho_a <= 0.
double reduced_gravity(double rho_b, double rho_a);

/// U0 / sqrt(g0p * d). Throws DomainError when g0p == 0 (Fr undefined) or
/// preconditions fail.
double froude(double U0, double g0p, double d);

/// (pi/4)^(1/4) * d * Fr.
double length_scale(double d, double Fr);

/// Populates every derived quantity; validates the case first.
DerivedQuantities derive(const JetCase& c);

/// Grid convergence index from three solutions on grids refined by ratio r.
struct GciResult {
  double p;           ///< observed order of convergence
  double gci_mf;      ///< GCI of the medium-fine pair
  double gci_cm;      ///< GCI of the coarse-medium pair
  double asymptotic;  ///< gci_mf * r^p / gci_cm, ~1 in the asymptotic range
};

/// Richardson-extrapolation GCI with safety factor 1.25. Relative error of
/// each pair is normalized by the finer solution of that pair. Throws
/// ConvergenceError on oscillatory sequences and DegenerateError on zero
/// differences or r^p == 1.
GciResult gci(double f_coarse, double f_medium, double f_fine, double r);

}  // namespace jetsurro::phys
