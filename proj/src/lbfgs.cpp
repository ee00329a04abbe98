#include "jetsurro/lbfgs.hpp"

#include <cmath>
#include <deque>

#include "jetsurro/numfmt.hpp"

namespace jetsurro::ml {

namespace {

struct Pair {
  Vector s, y;
  double rho;
};

// Two-loop recursion; H0 scaled by the last curvature pair.
Vector lbfgs_direction(const Vector& grad, const std::deque<Pair>& history) {
  Vector q = -grad;
  if (history.empty()) return q;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  const Pair& last = history.back();
  q *= last.s.dot(last.y) / last.y.dot(last.y);
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return q;
}

struct Probe {
  double f;
  double df;  // directional derivative
};

}  // namespace

LbfgsReport lbfgs_minimize(const Objective& f, Vector& w, const LbfgsOptions& opt,
                           std::vector<std::string>* log) {
  const auto note = [&](const std::string& msg) {
    if (log) log->push_back(msg);
  };

  Vector grad(w.size());
  double loss = f(w, grad);
  std::deque<Pair> history;
  LbfgsReport report;
  report.loss_history.push_back(loss);

  Vector w_trial(w.size()), grad_trial(w.size());
  const auto probe = [&](const Vector& dir, double a) -> Probe {
    w_trial = w + a * dir;
    const double fv = f(w_trial, grad_trial);
    return {fv, grad_trial.dot(dir)};
  };

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    report.grad_norm = grad.lpNorm<Eigen::Infinity>();
    if (report.grad_norm <= opt.grad_tol) {
      report.converged = true;
      break;
    }

    Vector dir = lbfgs_direction(grad, history);
    double dphi0 = grad.dot(dir);
    if (!(dphi0 < 0.0)) {  // not a descent direction; restart from steepest
      history.clear();
      dir = -grad;
      dphi0 = grad.dot(dir);
    }

    // Strong Wolfe line search (bracketing + bisection zoom).
    const double phi0 = loss;
    double a_accept = -1.0;
    Probe accepted{};
    {
      double a_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
      double a = history.empty() ? std::min(1.0, 1.0 / std::max(1.0, grad.norm())) : 1.0;
      double lo = -1.0, hi = -1.0, phi_lo = 0.0;
      for (int ls = 0; ls < opt.max_line_search; ++ls) {
        const Probe p = probe(dir, a);
        if (!std::isfinite(p.f) || p.f > phi0 + opt.c1 * a * dphi0 ||
            (ls > 0 && p.f >= phi_prev)) {
          lo = a_prev;
          phi_lo = phi_prev;
          hi = a;
          break;
        }
        if (std::abs(p.df) <= -opt.c2 * dphi0) {
          a_accept = a;
          accepted = p;
          break;
        }
        if (p.df >= 0.0) {
          lo = a;
          phi_lo = p.f;
          hi = a_prev;
          break;
        }
        a_prev = a;
        phi_prev = p.f;
        dphi_prev = p.df;
        a = std::min(2.0 * a, 1e6);
      }
      (void)dphi_prev;
      if (a_accept < 0.0 && lo >= 0.0) {
        for (int z = 0; z < opt.max_line_search && a_accept < 0.0; ++z) {
          const double a_mid = 0.5 * (lo + hi);
          if (std::abs(hi - lo) * std::max(1.0, std::abs(a_mid)) < 1e-16) break;
          const Probe p = probe(dir, a_mid);
          if (!std::isfinite(p.f) || p.f > phi0 + opt.c1 * a_mid * dphi0 ||
              p.f >= phi_lo) {
            hi = a_mid;
          } else {
            if (std::abs(p.df) <= -opt.c2 * dphi0) {
              a_accept = a_mid;
              accepted = p;
              break;
            }
            if (p.df * (hi - lo) >= 0.0) hi = lo;
            lo = a_mid;
            phi_lo = p.f;
          }
        }
      }
    }

    if (a_accept < 0.0) {
      // Fall back to a backtracking step along -grad.
      double a = 1.0 / std::max(1.0, grad.norm());
      bool moved = false;
      double f_bt = loss;
      for (int bt = 0; bt < 60; ++bt, a *= 0.5) {
        w_trial = w - a * grad;
        f_bt = f(w_trial, grad_trial);
        if (std::isfinite(f_bt) && f_bt < loss) {
          moved = true;
          break;
        }
      }
      note("iter " + std::to_string(iter) +
           ": line search failed, gradient fallback" + (moved ? "" : " (stuck)"));
      ++report.fallback_steps;
      if (!moved) break;
      history.clear();  // curvature information no longer trustworthy
      const Vector s = w_trial - w;
      const Vector yv = grad_trial - grad;
      w = w_trial;
      grad = grad_trial;
      loss = f_bt;
      report.loss_history.push_back(loss);
      const double sy = s.dot(yv);
      if (sy > 1e-10 * s.norm() * yv.norm())
        history.push_back({s, yv, 1.0 / sy});
      ++report.iterations;
      continue;
    }

    const Vector s = a_accept * dir;
    const Vector yv = grad_trial - grad;
    w = w_trial;
    grad = grad_trial;
    loss = accepted.f;
    report.loss_history.push_back(loss);
    const double sy = s.dot(yv);
    if (sy > 1e-10 * s.norm() * yv.norm()) {
      history.push_back({s, yv, 1.0 / sy});
      if (static_cast<int>(history.size()) > opt.memory) history.pop_front();
    }
    ++report.iterations;
  }

  report.loss = loss;
  report.grad_norm = grad.lpNorm<Eigen::Infinity>();
  if (report.grad_norm <= opt.grad_tol) report.converged = true;
  return report;
}

}  // namespace jetsurro::ml
