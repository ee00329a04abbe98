#include "jetsurro/jetphys.hpp"

#include <cmath>

namespace jetsurro::phys {

void JetCase::validate() const {
  if (!(theta > 0.0 && theta < 90.0))
    throw ValidationError("theta must lie in (0, 90) degrees exclusive");
  if (!(h_p > 0.0)) throw ValidationError("h_p must be strictly positive");
  if (!(H > 0.0)) throw ValidationError("H must be strictly positive");
  if (!(d > 0.0)) throw ValidationError("d must be strictly positive");
  if (!(U0 > 0.0)) throw ValidationError("U0 must be strictly positive");
  if (!(rho_b > 0.0)) throw ValidationError("rho_b must be strictly positive");
  if (!(rho_a > 0.0)) throw ValidationError("rho_a must be strictly positive");
  if (!(rho_b > rho_a))
    throw ValidationError("rho_b must exceed rho_a (negatively buoyant)");
  if (!(H >= 2.0 * h_p)) throw ValidationError("H must be at least 2*h_p");
}

double reduced_gravity(double rho_b, double rho_a) {
  if (!(rho_a > 0.0)) throw DomainError("reduced_gravity: rho_a must be positive");
  return kGravity * std::abs(rho_b - rho_a) / rho_a;
}

double froude(double U0, double g0p, double d) {
  if (g0p == 0.0)
    throw DomainError("froude: undefined at neutral buoyancy (g0' = 0)");
  if (!(g0p > 0.0)) throw DomainError("froude: g0' must be positive");
  if (!(d > 0.0)) throw DomainError("froude: d must be positive");
  return U0 / std::sqrt(g0p * d);
}

double length_scale(double d, double Fr) {
  if (!(d > 0.0)) throw DomainError("length_scale: d must be positive");
  if (!(Fr > 0.0)) throw DomainError("length_scale: Fr must be positive");
  return std::pow(M_PI / 4.0, 0.25) * d * Fr;
}

DerivedQuantities derive(const JetCase& c) {
  c.validate();
  DerivedQuantities q;
  q.g0p = reduced_gravity(c.rho_b, c.rho_a);
  q.Q = M_PI * c.d * c.d * c.U0 / 4.0;
  q.M = c.U0 * q.Q;
  q.B = q.g0p * q.Q;
  q.Fr = froude(c.U0, q.g0p, c.d);
  q.L_M = length_scale(c.d, q.Fr);
  q.coanda_ratio = c.h_p / q.L_M;
  q.shallow_ratio = c.d * q.Fr / c.H;
  return q;
}

GciResult gci(double f_coarse, double f_medium, double f_fine, double r) {
  if (!(r > 1.0)) throw DomainError("gci: refinement ratio must exceed 1");
  const double e_cm = f_medium - f_coarse;
  const double e_mf = f_fine - f_medium;
  if (e_cm == 0.0 || e_mf == 0.0)
    throw DegenerateError("gci: zero difference between grid solutions");
  if ((e_cm > 0.0) != (e_mf > 0.0))
    throw ConvergenceError("gci: oscillatory convergence (sign change)");

  constexpr double safety = 1.25;  // three-grid study convention
  GciResult out;
  out.p = std::log(std::abs(e_cm) / std::abs(e_mf)) / std::log(r);
  const double rp = std::pow(r, out.p);
  if (rp == 1.0)
    throw DegenerateError("gci: r^p == 1, Richardson extrapolation degenerate");
  if (f_fine == 0.0 || f_medium == 0.0)
    throw DegenerateError("gci: zero solution value, relative error undefined");
  out.gci_mf = safety * std::abs(e_mf / f_fine) / (rp - 1.0);
  out.gci_cm = safety * std::abs(e_cm / f_medium) / (rp - 1.0);
  out.asymptotic = out.gci_mf * rp / out.gci_cm;
  return out;
}

}  // namespace jetsurro::phys
