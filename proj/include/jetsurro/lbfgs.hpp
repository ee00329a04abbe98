#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jetsurro/types.hpp"

namespace jetsurro::ml {

/// Objective callback: fills grad, returns loss.
using Objective = std::function<double(const Vector& w, Vector& grad)>;

struct LbfgsOptions {
  int memory = 10;
  int max_iterations = 500;
  double grad_tol = 1e-6;  ///< on the max-abs gradient component
  double c1 = 1e-4;        ///< Armijo (sufficient decrease)
  double c2 = 0.9;         ///< curvature (strong Wolfe)
  int max_line_search = 30;
};

struct LbfgsReport {
  int iterations = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  int fallback_steps = 0;  ///< line-search failures recovered by a gradient step
  bool converged = false;
  std::vector<double> loss_history;  ///< loss at start plus after each accepted step
};

/// Limited-memory BFGS with two-loop recursion and a strong-Wolfe line
/// search. On line-search failure the iteration falls back to a backtracking
/// gradient step (recorded in `log`); if even that cannot decrease the loss,
/// the run stops. Accepted iterates never increase the loss.
LbfgsReport lbfgs_minimize(const Objective& f, Vector& w,
                           const LbfgsOptions& options = {},
                           std::vector<std::string>* log = nullptr);

}  // namespace jetsurro::ml
