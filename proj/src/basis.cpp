#include "stdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stdg/errors.hpp"

namespace stdg {

int IndexSet::cardinality() const {
  if (p < 1) throw std::invalid_argument("IndexSet: polynomial degree must be >= 1");
  switch (kind) {
    case IndexSetKind::TotalDegree:
      return (p + 1) * (p + 2) * (p + 3) / 6;
    case IndexSetKind::TimeTensorTotalSpace:
      return (p + 1) * (p + 1) * (p + 2) / 2;
    case IndexSetKind::FullTensor:
      return (p + 1) * (p + 1) * (p + 1);
  }
  return 0;
}

std::vector<std::array<int, 3>> IndexSet::exponents() const {
  if (p < 1) throw std::invalid_argument("IndexSet: polynomial degree must be >= 1");
  std::vector<std::array<int, 3>> expo;
  int pmax = (kind == IndexSetKind::TotalDegree) ? p : 2 * p;  // upper bound on a+b+c
  for (int deg = 0; deg <= (kind == IndexSetKind::FullTensor ? 3 * p : pmax); ++deg) {
    for (int c = 0; c <= std::min(deg, p); ++c) {
      for (int b = 0; b <= deg - c; ++b) {
        int a = deg - c - b;
        bool ok = false;
        switch (kind) {
          case IndexSetKind::TotalDegree:
            ok = (a + b + c <= p);
            break;
          case IndexSetKind::TimeTensorTotalSpace:
            ok = (a + b <= p && c <= p);
            break;
          case IndexSetKind::FullTensor:
            ok = (a <= p && b <= p && c <= p);
            break;
        }
        if (ok) expo.push_back({a, b, c});
      }
    }
  }
  return expo;
}

void ElementBasis::monomials(const std::vector<std::array<double, 3>>& pts,
                             Eigen::MatrixXd* val, Eigen::MatrixXd* dx, Eigen::MatrixXd* dy,
                             Eigen::MatrixXd* dt) const {
  const int n = int(expo.size());
  const int q = int(pts.size());
  int pmax = 0;
  for (const auto& e : expo) pmax = std::max({pmax, e[0], e[1], e[2]});

  Eigen::MatrixXd px(pmax + 1, q), py(pmax + 1, q), pt(pmax + 1, q);
  for (int k = 0; k < q; ++k) {
    double X = (pts[k][0] - box.cx()) / box.rx();
    double Y = (pts[k][1] - box.cy()) / box.ry();
    double T = (pts[k][2] - box.ct()) / box.rt();
    px(0, k) = py(0, k) = pt(0, k) = 1.0;
    for (int d = 1; d <= pmax; ++d) {
      px(d, k) = px(d - 1, k) * X;
      py(d, k) = py(d - 1, k) * Y;
      pt(d, k) = pt(d - 1, k) * T;
    }
  }

  if (val) val->resize(n, q);
  if (dx) dx->resize(n, q);
  if (dy) dy->resize(n, q);
  if (dt) dt->resize(n, q);
  for (int i = 0; i < n; ++i) {
    int a = expo[i][0], b = expo[i][1], c = expo[i][2];
    for (int k = 0; k < q; ++k) {
      double xa = px(a, k), yb = py(b, k), tc = pt(c, k);
      if (val) (*val)(i, k) = xa * yb * tc;
      if (dx) (*dx)(i, k) = a == 0 ? 0.0 : a / box.rx() * px(a - 1, k) * yb * tc;
      if (dy) (*dy)(i, k) = b == 0 ? 0.0 : b / box.ry() * xa * py(b - 1, k) * tc;
      if (dt) (*dt)(i, k) = c == 0 ? 0.0 : c / box.rt() * xa * yb * pt(c - 1, k);
    }
  }
}

void ElementBasis::evaluate(const std::vector<std::array<double, 3>>& pts,
                            Eigen::MatrixXd* val, Eigen::MatrixXd* dx, Eigen::MatrixXd* dy,
                            Eigen::MatrixXd* dt) const {
  Eigen::MatrixXd mv, mdx, mdy, mdt;
  monomials(pts, val ? &mv : nullptr, dx ? &mdx : nullptr, dy ? &mdy : nullptr,
            dt ? &mdt : nullptr);
  if (val) *val = coeffs * mv;
  if (dx) *dx = coeffs * mdx;
  if (dy) *dy = coeffs * mdy;
  if (dt) *dt = coeffs * mdt;
}

void ElementBasis::evaluate_point(double x, double y, double t, Eigen::VectorXd* val,
                                  Eigen::VectorXd* dx, Eigen::VectorXd* dy,
                                  Eigen::VectorXd* dt) const {
  Eigen::MatrixXd mv, mdx, mdy, mdt;
  std::vector<std::array<double, 3>> pts{{x, y, t}};
  evaluate(pts, val ? &mv : nullptr, dx ? &mdx : nullptr, dy ? &mdy : nullptr,
           dt ? &mdt : nullptr);
  if (val) *val = mv.col(0);
  if (dx) *dx = mdx.col(0);
  if (dy) *dy = mdy.col(0);
  if (dt) *dt = mdt.col(0);
}

ElementBasis orthonormalize(const IndexSet& set, int element_id, int substep,
                            const PrismBox& box, const QuadRule& rule) {
  ElementBasis basis;
  basis.element_id = element_id;
  basis.substep = substep;
  basis.index_set = set;
  basis.box = box;
  basis.expo = set.exponents();
  const int n = int(basis.expo.size());
  basis.coeffs = Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd M;
  basis.monomials(rule.points, &M, nullptr, nullptr, nullptr);
  Eigen::VectorXd sw(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) sw(q) = std::sqrt(rule.weights[q]);
  Eigen::MatrixXd A = M.transpose();  // (npts x n)
  for (int i = 0; i < n; ++i) A.col(i).array() *= sw.array();

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  auto mgs_pass = [&](Eigen::MatrixXd& R_out) {
    Eigen::VectorXd norm0(n);
    for (int j = 0; j < n; ++j) norm0(j) = A.col(j).norm();
    R_out.setZero(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < j; ++k) {
        double r = A.col(k).dot(A.col(j));
        R_out(k, j) = r;
        A.col(j) -= r * A.col(k);
      }
      double d = A.col(j).norm();
      if (!(d > 1e-7 * norm0(j)))
        throw ConditioningError(
            "orthonormalize: monomial Gram matrix numerically singular on element " +
            std::to_string(element_id) + " (degree " + std::to_string(set.p) + ")");
      R_out(j, j) = d;
      A.col(j) /= d;
    }
  };
  Eigen::MatrixXd R1, R2;
  mgs_pass(R1);
  mgs_pass(R2);  // re-orthogonalization
  R = R2 * R1;

  Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
  basis.coeffs = Rinv.transpose();
  return basis;
}

}  // namespace stdg
