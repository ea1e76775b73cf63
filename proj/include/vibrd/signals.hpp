#pragma once

#include <optional>
#include <vector>

#include "vibrd/polytope.hpp"

namespace vibrd {

/// One sinusoid term a * shape(omega * t + phi) on a single component.
struct SignalTerm {
  enum class Shape { Sin, Cos };
  double amplitude = 0.0;
  double omega = 0.0;  // rad per time unit
  double phase = 0.0;
  Shape shape = Shape::Sin;
  int component = 0;
};

/// Exponential envelope k * e^{-lambda t} multiplying the whole signal.
struct Envelope {
  double scale = 1.0;
  double lambda = 0.0;  // >= 0 keeps the signal and its derivative bounded
};

struct SignalBounds {
  Vector component_sup;             // per-component sup over t >= 0
  Vector component_derivative_sup;  // per-component sup of |d/dt|
  double sup_norm = 0.0;            // Euclidean norm of component_sup
  double derivative_sup_norm = 0.0;
};

/// Time-varying disturbance: sum of sinusoid terms plus an optional constant
/// offset, all under an optional exponential envelope. Immutable; evaluation
/// is pure and concurrent-safe.
class TimeSignal {
public:
  explicit TimeSignal(int dim);
  static TimeSignal zero(int dim) { return TimeSignal(dim); }

  TimeSignal& add_term(SignalTerm term);
  TimeSignal& set_envelope(Envelope env);
  TimeSignal& set_constant(Vector c);

  int dim() const { return dim_; }
  bool is_zero() const;
  const std::vector<SignalTerm>& terms() const { return terms_; }
  const std::optional<Envelope>& envelope() const { return env_; }
  const Vector& constant() const { return constant_; }

  Vector evaluate(double t) const;

  /// Conservative analytic envelopes: per component sum of |a| (times the
  /// envelope scale), derivative per term |a| (omega + lambda).
  SignalBounds bounds() const;

private:
  int dim_;
  std::vector<SignalTerm> terms_;
  std::optional<Envelope> env_;
  Vector constant_;
};

/// True iff x + step stays in K within tol. The disturbed integrator raises
/// AdmissibilityViolated when this fails along the realized trajectory.
bool check_admissible_step(const Polytope& K, const Vector& x,
                           const Vector& step, double tol);

}  // namespace vibrd
