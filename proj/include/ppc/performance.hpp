#pragma once

#include <map>

#include "ppc/errors.hpp"
#include "ppc/graph.hpp"

namespace ppc {

/// Exponential performance funnel rho(t) = (rho0 - rho_inf) e^{-decay t} + rho_inf.
/// Strictly decreasing from rho0 toward the asymptote rho_inf.
struct PerformanceFunction {
  double rho0 = 0.0;
  double rho_inf = 0.0;
  double decay = 0.0;

  /// Throws StructuralError unless rho0 > rho_inf > 0 and decay > 0.
  static PerformanceFunction make(double rho0, double rho_inf, double decay);
};

double rho(const PerformanceFunction& pf, double t);

/// Time derivative of rho; always negative.
double rho_dot(const PerformanceFunction& pf, double t);

/// alpha(t) = -rho_dot(t) / rho(t), in (0, decay).
double alpha(const PerformanceFunction& pf, double t);

/// Exact supremum of alpha over t >= 0: decay * (rho0 - rho_inf) / rho0,
/// attained at t = 0.
double alpha_bar(const PerformanceFunction& pf);

/// s / rho(t). No range restriction; monitors handle violations.
double normalize(double s, const PerformanceFunction& pf, double t);

/// Strict membership in the open funnel interval (-1, 1).
bool in_region(double s_hat);

/// Funnel assignment for a channel: one shared funnel plus optional per-edge
/// overrides keyed by node pair. The funnel clock is global simulation time.
struct FunnelSpec {
  PerformanceFunction base;
  std::map<Edge, PerformanceFunction> overrides;

  const PerformanceFunction& for_edge(const Edge& edge) const {
    auto it = overrides.find(edge);
    return it == overrides.end() ? base : it->second;
  }
};

}  // namespace ppc
