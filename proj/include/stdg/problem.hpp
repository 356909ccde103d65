#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace stdg {

// Reference solution with exact spatial gradient, for error measurement.
struct ExactSolution {
  std::function<double(double t, double x, double y)> value;
  std::function<Eigen::Vector2d(double t, double x, double y)> gradient;
};

// Data for the parabolic model problem du/dt - div(a grad u) = f with
// Dirichlet data g_D and initial datum u0. `theta` is the user-supplied
// uniform ellipticity lower bound; it is spot-checked at quadrature points.
struct ProblemData {
  std::function<Eigen::Matrix2d(double t, double x, double y)> a;
  double theta = 1.0;
  std::function<double(double t, double x, double y)> f;
  std::function<double(double t, double x, double y)> g_D;
  std::function<double(double x, double y)> u0;
  std::optional<ExactSolution> exact;

  // When set, f behaves like t^(alpha-1) near t=0 and the right-hand-side
  // time quadrature on the first slab is graded accordingly.
  std::optional<double> f_time_alpha;
};

// Named problems: "example1" (oscillating Gaussian), "example2" (t^alpha
// initial layer), "heat_decay" (separable decaying mode).
ProblemData make_problem(const std::string& name);
ProblemData make_example1();
ProblemData make_example2(double alpha = 0.5);
ProblemData make_heat_decay();

}  // namespace stdg
