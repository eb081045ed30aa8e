#include "ppc/transform.hpp"

#include <cmath>
#include <sstream>

namespace ppc {

std::string channel_name(Channel channel) {
  return channel == Channel::position ? "position" : "velocity";
}

namespace {
[[noreturn]] void throw_violation(double s_hat, Channel channel, int i, int j,
                                  double t) {
  std::ostringstream os;
  os << "funnel violation: |s_hat| = " << std::abs(s_hat) << " >= 1 on "
     << channel_name(channel) << " channel";
  if (i != 0) os << ", edge (" << i << ", " << j << ")";
  os << ", t = " << t;
  throw FunnelViolation(os.str(), channel_name(channel), i, j, t, s_hat);
}
}  // namespace

double epsilon(double s_hat) {
  if (!(std::abs(s_hat) < 1.0)) {
    throw_violation(s_hat, Channel::position, 0, 0, 0.0);
  }
  return 2.0 * std::atanh(s_hat);
}

double epsilon_inv(double e) { return std::tanh(0.5 * e); }

double jacobian(double s_hat) {
  if (!(std::abs(s_hat) < 1.0)) {
    throw_violation(s_hat, Channel::position, 0, 0, 0.0);
  }
  return 2.0 / (1.0 - s_hat * s_hat);
}

TransformBundle transform_edges(const Eigen::VectorXd& s,
                                const std::vector<Edge>& edges,
                                const FunnelSpec& funnels, double t,
                                Channel channel, double guard, int* clamped) {
  const auto m = s.size();
  if (m != static_cast<Eigen::Index>(edges.size())) {
    throw StructuralError("edge state vector length does not match edge list");
  }
  TransformBundle out;
  out.s_hat.resize(m);
  out.eps.resize(m);
  out.jac.resize(m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const Edge& edge = edges[static_cast<std::size_t>(l)];
    double s_hat = normalize(s[l], funnels.for_edge(edge), t);
    if (!in_region(s_hat)) {
      if (guard > 0.0) {
        s_hat = std::copysign(1.0 - guard, s_hat);
        if (clamped) ++*clamped;
      } else {
        throw_violation(s_hat, channel, edge.first, edge.second, t);
      }
    } else if (guard > 0.0 && std::abs(s_hat) > 1.0 - guard) {
      s_hat = std::copysign(1.0 - guard, s_hat);
      if (clamped) ++*clamped;
    }
    out.s_hat[l] = s_hat;
    out.eps[l] = 2.0 * std::atanh(s_hat);
    out.jac[l] = 2.0 / (1.0 - s_hat * s_hat);
  }
  return out;
}

}  // namespace ppc
