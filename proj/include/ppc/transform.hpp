#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ppc/errors.hpp"
#include "ppc/performance.hpp"

namespace ppc {

enum class Channel { position, velocity };

std::string channel_name(Channel channel);

/// Logarithmic funnel transformation ln((1+s_hat)/(1-s_hat)), i.e. 2 artanh.
/// Odd, strictly increasing, maps (-1, 1) onto the reals. Throws
/// FunnelViolation at |s_hat| >= 1.
double epsilon(double s_hat);

/// Inverse transformation tanh(e/2); total on the reals, overflow-free.
double epsilon_inv(double e);

/// d epsilon / d s_hat = 2 / (1 - s_hat^2) >= 2. Throws FunnelViolation at
/// |s_hat| >= 1.
double jacobian(double s_hat);

/// Componentwise normalize -> epsilon -> jacobian over an edge vector.
struct TransformBundle {
  Eigen::VectorXd s_hat;
  Eigen::VectorXd eps;
  Eigen::VectorXd jac;
};

/// Transforms edge states against their funnels at time t. A component outside
/// the open region raises FunnelViolation identifying channel, edge index, and
/// node pair. With guard > 0, out-of-region components are instead clamped to
/// |s_hat| = 1 - guard and *clamped is incremented; used only for integrator
/// stage probes, never for observed states.
TransformBundle transform_edges(const Eigen::VectorXd& s,
                                const std::vector<Edge>& edges,
                                const FunnelSpec& funnels, double t,
                                Channel channel, double guard = 0.0,
                                int* clamped = nullptr);

}  // namespace ppc
