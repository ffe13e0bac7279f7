#include "fsis/quadrature.hpp"

#include <cmath>

namespace fsis {

QuadratureRule gauss_jacobi_01(int n, double alpha) {
  // Golub-Welsch for weight (1-x)^alpha (1+x)^0 on [-1,1], then map to [0,1].
  const double a = alpha, b = 0.0;
  Mat T = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double denom = (2 * k + a + b) * (2 * k + a + b + 2);
    T(k, k) = (denom == 0.0) ? (b - a) / (a + b + 2) : (b * b - a * a) / denom;
  }
  for (int k = 1; k < n; ++k) {
    double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    double den = std::pow(2 * k + a + b, 2) * (2 * k + a + b + 1) * (2 * k + a + b - 1);
    double beta = std::sqrt(num / den);
    T(k, k - 1) = T(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);  // total weight, beta = 0
  QuadratureRule rule;
  rule.points.resize(n, 1);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()(i);
    double w = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    rule.points(i, 0) = 0.5 * (1.0 + x);
    rule.weights(i) = w / std::pow(2.0, a + 1.0);
  }
  return rule;
}

QuadratureRule simplex_rule(int dim, int degree) {
  const int n = degree / 2 + 1;  // per-direction Gauss points, exact to 2n-1 >= degree
  if (dim == 1) return gauss_jacobi_01(n, 0.0);
  std::vector<QuadratureRule> line(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j)
    line[static_cast<size_t>(j)] = gauss_jacobi_01(n, static_cast<double>(dim - 1 - j));
  Index total = 1;
  for (int j = 0; j < dim; ++j) total *= n;
  QuadratureRule rule;
  rule.points.resize(total, dim);
  rule.weights.resize(total);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    double w = 1.0, shrink = 1.0;
    Vec xi = Vec::Zero(dim);
    for (int j = 0; j < dim; ++j) {
      int i = static_cast<int>(rem % n);
      rem /= n;
      double t = line[static_cast<size_t>(j)].points(i, 0);
      xi(j) = t * shrink;
      shrink *= (1.0 - t);
      w *= line[static_cast<size_t>(j)].weights(i);
    }
    rule.points.row(flat) = xi.transpose();
    rule.weights(flat) = w;
  }
  return rule;
}

}  // namespace fsis
