#include "bouligand/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bouligand/error.hpp"

namespace bouligand {

PC1Nonlinearity::PC1Nonlinearity(std::vector<double> breakpoints, std::vector<Branch> branches,
                                 bool piecewise_linear, std::string name)
    : breakpoints_(std::move(breakpoints)),
      branches_(std::move(branches)),
      piecewise_linear_(piecewise_linear),
      name_(std::move(name)) {
  if (branches_.size() != breakpoints_.size() + 1)
    throw Error(ErrorCode::InvalidArgument, "need exactly one more branch than breakpoints");
  for (const auto& b : branches_)
    if (!b.value || !b.derivative)
      throw Error(ErrorCode::InvalidArgument, "branch lacks a value or derivative function");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i]))
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be finite");
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i]))
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
  }

  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double t = breakpoints_[i];
    const double left = branches_[i].value(t), right = branches_[i + 1].value(t);
    if (std::abs(left - right) > 1e-12 * std::max(1.0, std::abs(left))) {
      std::ostringstream msg;
      msg << "branches " << i + 1 << " and " << i + 2 << " disagree at breakpoint " << t << ": "
          << left << " vs " << right;
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }

  // Monotonicity spot check on each branch interval; unbounded ends are
  // sampled over a window of width 10 beyond the nearest breakpoint.
  constexpr int kSamples = 64;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const double lo = i == 0 ? (breakpoints_.empty() ? -10.0 : breakpoints_.front() - 10.0)
                             : breakpoints_[i - 1];
    const double hi = i == breakpoints_.size()
                          ? (breakpoints_.empty() ? 10.0 : breakpoints_.back() + 10.0)
                          : breakpoints_[i];
    for (int s = 0; s <= kSamples; ++s) {
      const double t = lo + (hi - lo) * s / kSamples;
      const double d = branches_[i].derivative(t);
      if (!(d >= 0.0)) {
        std::ostringstream msg;
        msg << "branch " << i + 1 << " has negative or undefined slope " << d << " at " << t;
        throw Error(ErrorCode::InvalidArgument, msg.str());
      }
    }
  }
}

PC1Nonlinearity PC1Nonlinearity::max0() {
  std::vector<Branch> branches{
      {[](double) { return 0.0; }, [](double) { return 0.0; }},
      {[](double t) { return t; }, [](double) { return 1.0; }},
  };
  PC1Nonlinearity f({0.0}, std::move(branches), true, "max");
  f.is_max0_ = true;
  return f;
}

int PC1Nonlinearity::bouligand_branch(double t) const {
  // Number of breakpoints strictly below t.
  return static_cast<int>(std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                          breakpoints_.begin());
}

int PC1Nonlinearity::newton_branch(double t) const {
  // Number of breakpoints at or below t.
  return static_cast<int>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                          breakpoints_.begin());
}

double PC1Nonlinearity::operator()(double t) const {
  if (is_max0_) return t > 0.0 ? t : 0.0;
  return branches_[static_cast<std::size_t>(bouligand_branch(t))].value(t);
}

double PC1Nonlinearity::newton_slope(double t) const {
  if (is_max0_) return t >= 0.0 ? 1.0 : 0.0;
  return branches_[static_cast<std::size_t>(newton_branch(t))].derivative(t);
}

double PC1Nonlinearity::bouligand_slope(double t) const {
  if (is_max0_) return t > 0.0 ? 1.0 : 0.0;
  return branches_[static_cast<std::size_t>(bouligand_branch(t))].derivative(t);
}

}  // namespace bouligand
