#include "stdg/problem.hpp"

#include <cmath>

#include "stdg/errors.hpp"

namespace stdg {

namespace {
Eigen::Matrix2d identity_tensor(double, double, double) {
  return Eigen::Matrix2d::Identity();
}
}  // namespace

ProblemData make_example1() {
  ProblemData data;
  data.a = identity_tensor;
  data.theta = 1.0;
  auto bump = [](double x, double y) {
    return std::exp(-5.0 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)));
  };
  auto value = [bump](double t, double x, double y) {
    return std::sin(20.0 * M_PI * t) * bump(x, y);
  };
  data.exact = ExactSolution{
      value,
      [bump](double t, double x, double y) {
        double g = std::sin(20.0 * M_PI * t) * bump(x, y);
        return Eigen::Vector2d(-10.0 * (x - 0.5) * g, -10.0 * (y - 0.5) * g);
      },
  };
  data.f = [bump](double t, double x, double y) {
    double g = bump(x, y);
    double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
    double du_dt = 20.0 * M_PI * std::cos(20.0 * M_PI * t) * g;
    double lap = std::sin(20.0 * M_PI * t) * g * (100.0 * r2 - 20.0);
    return du_dt - lap;
  };
  data.g_D = value;
  data.u0 = [value](double x, double y) { return value(0.0, x, y); };
  return data;
}

ProblemData make_example2(double alpha) {
  ProblemData data;
  data.a = identity_tensor;
  data.theta = 1.0;
  auto mode = [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); };
  auto value = [mode, alpha](double t, double x, double y) {
    return std::pow(t, alpha) * mode(x, y);
  };
  data.exact = ExactSolution{
      value,
      [alpha](double t, double x, double y) {
        double ta = std::pow(t, alpha);
        return Eigen::Vector2d(ta * M_PI * std::cos(M_PI * x) * std::sin(M_PI * y),
                               ta * M_PI * std::sin(M_PI * x) * std::cos(M_PI * y));
      },
  };
  data.f = [mode, alpha](double t, double x, double y) {
    // alpha*t^(alpha-1)*mode + 2*pi^2*t^alpha*mode; singular at t=0.
    double s = mode(x, y);
    return alpha * std::pow(t, alpha - 1.0) * s + 2.0 * M_PI * M_PI * std::pow(t, alpha) * s;
  };
  data.g_D = [](double, double, double) { return 0.0; };
  data.u0 = [](double, double) { return 0.0; };
  data.f_time_alpha = alpha;
  return data;
}

ProblemData make_heat_decay() {
  ProblemData data;
  data.a = identity_tensor;
  data.theta = 1.0;
  auto mode = [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); };
  auto value = [mode](double t, double x, double y) {
    return std::exp(-2.0 * M_PI * M_PI * t) * mode(x, y);
  };
  data.exact = ExactSolution{
      value,
      [](double t, double x, double y) {
        double d = std::exp(-2.0 * M_PI * M_PI * t);
        return Eigen::Vector2d(d * M_PI * std::cos(M_PI * x) * std::sin(M_PI * y),
                               d * M_PI * std::sin(M_PI * x) * std::cos(M_PI * y));
      },
  };
  data.f = [](double, double, double) { return 0.0; };
  data.g_D = [](double, double, double) { return 0.0; };
  data.u0 = mode;
  return data;
}

ProblemData make_problem(const std::string& name) {
  if (name == "example1") return make_example1();
  if (name == "example2") return make_example2();
  if (name == "heat_decay") return make_heat_decay();
  throw ConfigError("problem.name: unknown problem '" + name + "'");
}

}  // namespace stdg
