#include "ppc/controller.hpp"

#include <sstream>

namespace ppc {

namespace {
void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    std::ostringstream os;
    os << "gain " << name << " must be positive, got " << value;
    throw ValidationError(os.str());
  }
}
}  // namespace

GainSet GainSet::make(double h1, double h2, double h3, double h4, double h5,
                      double h6, double phi, double a2, double a3, double a4) {
  require_positive(h1, "h1");
  require_positive(h2, "h2");
  require_positive(h3, "h3");
  require_positive(h4, "h4");
  require_positive(h5, "h5");
  require_positive(h6, "h6");
  require_positive(phi, "phi");
  require_positive(a2, "a2");
  require_positive(a3, "a3");
  require_positive(a4, "a4");
  if (!(h5 > h4)) {
    std::ostringstream os;
    os << "h5 must exceed h4, got h5 = " << h5 << ", h4 = " << h4;
    throw ValidationError(os.str());
  }
  return GainSet{h1, h2, h3, h4, h5, h6, phi, a2, a3, a4};
}

FeasibilityReport validate_gains(const GainSet& g, double alpha_bar_y,
                                 double alpha_bar_z) {
  if (!(alpha_bar_y > 0.0) || !(alpha_bar_z > 0.0)) {
    throw ValidationError("alpha_bar values must be positive");
  }
  FeasibilityReport r{};
  r.c1 = 4.0 * g.h1 * g.h4 - (g.h3 - g.h2) * (g.h3 - g.h2);
  r.c2 = g.h3 - g.h2 - 2.0 * g.h5 * alpha_bar_y;
  r.c3 = g.h4 * g.phi - g.h6 * alpha_bar_z;
  r.c4 = 2.0 * g.h6 * g.phi - g.a2 * g.phi * (g.h3 - g.h2) - 2.0 * g.h6 * g.a4;
  r.alpha_bar_y = alpha_bar_y;
  r.alpha_bar_z = alpha_bar_z;
  r.feasible = r.c1 > 0.0 && r.c2 > 0.0 && r.c3 > 0.0 && r.c4 > 0.0;
  return r;
}

double quadratic_form(const GainSet& g, const Eigen::VectorXd& e1,
                      const Eigen::VectorXd& e2) {
  if (e1.size() != e2.size()) {
    throw DomainError("quadratic form probes must have equal length");
  }
  return g.h1 * e1.squaredNorm() + (g.h3 - g.h2) * e1.dot(e2) +
         g.h4 * e2.squaredNorm();
}

bool quadratic_form_positive(const GainSet& g, const Eigen::VectorXd& e1,
                             const Eigen::VectorXd& e2) {
  if (e1.isZero(0.0) && e2.isZero(0.0)) {
    throw DomainError("quadratic form probe pair must be nonzero");
  }
  return quadratic_form(g, e1, e2) > 0.0;
}

Eigen::VectorXd control(const IncidenceMatrix& incidence,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                        const FunnelSpec& funnels_y, const FunnelSpec& funnels_z,
                        double t, const GainSet& gains, double guard,
                        int* clamped) {
  const Eigen::MatrixXd b = incidence.entries.cast<double>();
  const Eigen::VectorXd y = b.transpose() * x;
  const Eigen::VectorXd z = b.transpose() * v;
  const TransformBundle ty = transform_edges(y, incidence.edge_order, funnels_y,
                                             t, Channel::position, guard, clamped);
  const TransformBundle tz = transform_edges(z, incidence.edge_order, funnels_z,
                                             t, Channel::velocity, guard, clamped);
  return -b * ty.jac.cwiseProduct(ty.eps).matrix() -
         gains.phi * b * tz.jac.cwiseProduct(tz.eps).matrix();
}

}  // namespace ppc
