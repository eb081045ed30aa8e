#pragma once

#include <Eigen/Dense>

#include "ppc/graph.hpp"
#include "ppc/performance.hpp"
#include "ppc/transform.hpp"

namespace ppc {

/// Control and certificate gains. Only phi enters the control law; h1..h6 and
/// a2..a4 parameterize the feasibility certificate.
struct GainSet {
  double h1, h2, h3, h4, h5, h6;
  double phi;
  double a2, a3, a4;

  /// Throws ValidationError naming the first nonpositive field, or when
  /// h5 <= h4.
  static GainSet make(double h1, double h2, double h3, double h4, double h5,
                      double h6, double phi, double a2, double a3, double a4);
};

/// Margins of the four gain inequalities; feasible iff all strictly positive.
struct FeasibilityReport {
  double c1;  // 4 h1 h4 - (h3 - h2)^2
  double c2;  // h3 - h2 - 2 h5 alpha_bar_y
  double c3;  // h4 phi - h6 alpha_bar_z
  double c4;  // 2 h6 phi - a2 phi (h3 - h2) - 2 h6 a4
  bool feasible;
  double alpha_bar_y;
  double alpha_bar_z;

  double min_margin() const { return std::min(std::min(c1, c2), std::min(c3, c4)); }
};

FeasibilityReport validate_gains(const GainSet& gains, double alpha_bar_y,
                                 double alpha_bar_z);

/// Value of h1 ||e1||^2 + (h3 - h2) e1' e2 + h4 ||e2||^2.
double quadratic_form(const GainSet& gains, const Eigen::VectorXd& e1,
                      const Eigen::VectorXd& e2);

/// Strict positivity of the form above. Throws DomainError on a zero probe
/// pair or mismatched lengths.
bool quadratic_form_positive(const GainSet& gains, const Eigen::VectorXd& e1,
                             const Eigen::VectorXd& e2);

/// Distributed funnel-consensus input:
///   u = -B J_y(y_hat) eps_y(y_hat) - phi B J_z(z_hat) eps_z(z_hat)
/// with y = B' x and z = B' v. Column sums of B are zero, so 1' u = 0 up to
/// floating-point summation error. Guard semantics as in transform_edges.
Eigen::VectorXd control(const IncidenceMatrix& incidence,
                        const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                        const FunnelSpec& funnels_y, const FunnelSpec& funnels_z,
                        double t, const GainSet& gains, double guard = 0.0,
                        int* clamped = nullptr);

}  // namespace ppc
