#pragma once

#include "ppc/simulator.hpp"

namespace ppc {

/// The bundled five-agent reference scenario: cyclic switching G1 -> G2 -> G3
/// with 0.1 s dwell, exponential funnels (5, 0.1, 1.5) on positions and
/// (5, 0.1, 0.8) on velocities, and the reference gain set. Each graph alone
/// is disconnected; the cycle union is connected, so the run exercises joint
/// rather than pointwise connectivity.
Scenario reference_scenario();

}  // namespace ppc
