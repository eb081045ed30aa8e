#pragma once

#include <stdexcept>
#include <string>

namespace ppc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph, schedule, or scenario structure.
class StructuralError : public Error {
public:
  using Error::Error;
};

/// Argument outside an operation's mathematical domain (e.g. negative time).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A normalized error left the open funnel interval (-1, 1).
class FunnelViolation : public Error {
public:
  FunnelViolation(std::string message, std::string channel, int edge_i,
                  int edge_j, double t, double s_hat)
      : Error(std::move(message)), channel(std::move(channel)), edge_i(edge_i),
        edge_j(edge_j), t(t), s_hat(s_hat) {}

  std::string channel;  // "position" or "velocity"
  int edge_i = 0;       // 0 when no edge context is available
  int edge_j = 0;
  double t = 0.0;
  double s_hat = 0.0;
};

/// Assumption-3 check failed when a graph became active.
class InfeasibleActivation : public Error {
public:
  InfeasibleActivation(std::string message, std::string channel, int edge_i,
                       int edge_j, double t, double value, double bound)
      : Error(std::move(message)), channel(std::move(channel)), edge_i(edge_i),
        edge_j(edge_j), t(t), value(value), bound(bound) {}

  std::string channel;
  int edge_i = 0;
  int edge_j = 0;
  double t = 0.0;
  double value = 0.0;
  double bound = 0.0;
};

/// Non-finite state produced during integration.
class IntegrationBlowup : public Error {
public:
  using Error::Error;
};

/// Time query beyond a non-cyclic schedule's horizon.
class ScheduleRangeError : public Error {
public:
  using Error::Error;
};

/// Scenario file could not be parsed or validated.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Gain set failed a type invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

}  // namespace ppc
