#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bouligand {

// Continuous, non-decreasing, piecewise C^1 function given by breakpoints
// t_1 < ... < t_k and selection branches f_1, ..., f_{k+1}. Branch i is
// active on (t_{i-1}, t_i] with t_0 = -inf and t_{k+1} = +inf.
class PC1Nonlinearity {
 public:
  struct Branch {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
  };

  // Checks continuity at every breakpoint to 1e-12 and spot-checks that every
  // branch derivative is non-negative on its interval. Throws
  // Error(InvalidArgument) otherwise. piecewise_linear asserts that all
  // branches are affine, which enables finite SSN termination.
  PC1Nonlinearity(std::vector<double> breakpoints, std::vector<Branch> branches,
                  bool piecewise_linear = false, std::string name = "custom");

  // f(t) = max(t, 0): t_1 = 0, f_1 = 0, f_2 = id.
  static PC1Nonlinearity max0();

  double operator()(double t) const;

  // Branch index under the closed-right convention: the i with
  // t in (t_{i-1}, t_i]. A value sitting on t_i selects branch i.
  int bouligand_branch(double t) const;
  // Branch index used by the Newton derivative: a value on t_i selects the
  // right branch i+1 (the y >= 0 convention for max).
  int newton_branch(double t) const;

  // f_i'(t) for i = newton_branch(t).
  double newton_slope(double t) const;
  // Coefficient of the Bouligand subderivative: f_i'(t) for i = bouligand_branch(t).
  double bouligand_slope(double t) const;

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  std::size_t num_branches() const noexcept { return branches_.size(); }
  bool piecewise_linear() const noexcept { return piecewise_linear_; }
  bool is_max0() const noexcept { return is_max0_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<Branch> branches_;
  bool piecewise_linear_;
  bool is_max0_ = false;
  std::string name_;
};

}  // namespace bouligand
