#include "ppc/performance.hpp"

#include <cmath>
#include <sstream>

namespace ppc {

namespace {
void require_nonnegative_time(double t) {
  if (t < 0.0) {
    std::ostringstream os;
    os << "performance function evaluated at negative time t = " << t;
    throw DomainError(os.str());
  }
}
}  // namespace

PerformanceFunction PerformanceFunction::make(double rho0, double rho_inf,
                                              double decay) {
  if (!(rho_inf > 0.0) || !(rho0 > rho_inf)) {
    std::ostringstream os;
    os << "funnel requires rho0 > rho_inf > 0, got rho0 = " << rho0
       << ", rho_inf = " << rho_inf;
    throw StructuralError(os.str());
  }
  if (!(decay > 0.0)) {
    std::ostringstream os;
    os << "funnel decay must be positive, got " << decay;
    throw StructuralError(os.str());
  }
  return PerformanceFunction{rho0, rho_inf, decay};
}

double rho(const PerformanceFunction& pf, double t) {
  require_nonnegative_time(t);
  return (pf.rho0 - pf.rho_inf) * std::exp(-pf.decay * t) + pf.rho_inf;
}

double rho_dot(const PerformanceFunction& pf, double t) {
  require_nonnegative_time(t);
  return -pf.decay * (pf.rho0 - pf.rho_inf) * std::exp(-pf.decay * t);
}

double alpha(const PerformanceFunction& pf, double t) {
  return -rho_dot(pf, t) / rho(pf, t);
}

double alpha_bar(const PerformanceFunction& pf) {
  return pf.decay * (pf.rho0 - pf.rho_inf) / pf.rho0;
}

double normalize(double s, const PerformanceFunction& pf, double t) {
  return s / rho(pf, t);
}

bool in_region(double s_hat) { return s_hat > -1.0 && s_hat < 1.0; }

}  // namespace ppc
