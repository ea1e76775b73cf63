#include "vibrd/signals.hpp"

#include <cmath>

#include "vibrd/errors.hpp"

namespace vibrd {

TimeSignal::TimeSignal(int dim) : dim_(dim), constant_(Vector::Zero(dim)) {
  if (dim < 1) throw ValidationError("signal dimension must be positive");
}

TimeSignal& TimeSignal::add_term(SignalTerm term) {
  if (term.component < 0 || term.component >= dim_)
    throw DimensionMismatch("signal term component out of range");
  terms_.push_back(term);
  return *this;
}

TimeSignal& TimeSignal::set_envelope(Envelope env) {
  if (env.lambda < 0)
    throw ValidationError("envelope decay must be nonnegative");
  env_ = env;
  return *this;
}

TimeSignal& TimeSignal::set_constant(Vector c) {
  if (c.size() != dim_) throw DimensionMismatch("constant offset dimension");
  constant_ = std::move(c);
  return *this;
}

bool TimeSignal::is_zero() const {
  bool const_zero = constant_.isZero(0.0);
  if (terms_.empty() && const_zero) return true;
  double amp = 0.0;
  for (const SignalTerm& t : terms_) amp += std::abs(t.amplitude);
  return amp == 0.0 && const_zero;
}

Vector TimeSignal::evaluate(double t) const {
  if (t < 0) throw ValidationError("signals are defined for t >= 0");
  Vector out = constant_;
  for (const SignalTerm& term : terms_) {
    double arg = term.omega * t + term.phase;
    double v = term.shape == SignalTerm::Shape::Sin ? std::sin(arg)
                                                    : std::cos(arg);
    out(term.component) += term.amplitude * v;
  }
  if (env_) out *= env_->scale * std::exp(-env_->lambda * t);
  return out;
}

SignalBounds TimeSignal::bounds() const {
  const double k = env_ ? env_->scale : 1.0;
  const double lambda = env_ ? env_->lambda : 0.0;
  SignalBounds sb;
  sb.component_sup = Vector::Zero(dim_);
  sb.component_derivative_sup = Vector::Zero(dim_);
  for (const SignalTerm& term : terms_) {
    sb.component_sup(term.component) += k * std::abs(term.amplitude);
    sb.component_derivative_sup(term.component) +=
        k * std::abs(term.amplitude) * (term.omega + lambda);
  }
  for (int i = 0; i < dim_; ++i) {
    sb.component_sup(i) += k * std::abs(constant_(i));
    sb.component_derivative_sup(i) += k * lambda * std::abs(constant_(i));
  }
  sb.sup_norm = sb.component_sup.norm();
  sb.derivative_sup_norm = sb.component_derivative_sup.norm();
  return sb;
}

bool check_admissible_step(const Polytope& K, const Vector& x,
                           const Vector& step, double tol) {
  if (!K.contains(x, tol))
    throw ValidationError("admissibility check from an infeasible point");
  return K.contains(x + step, tol);
}

}  // namespace vibrd
