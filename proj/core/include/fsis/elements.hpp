#pragma once

#include <vector>

#include "fsis/quadrature.hpp"
#include "fsis/types.hpp"

namespace fsis {

/// Lagrange P1/P2 basis on the reference d-simplex, tabulated at quadrature
/// points. P2 node order: the d+1 vertices, then one node per edge (i,j),
/// i < j lexicographic -- edge midpoints in physical space.
struct ElementBasis {
  int dim = 0;
  int degree = 1;
  Index n_basis = 0;
  Mat values;                      // n_basis x n_q
  std::vector<Mat> ref_gradients;  // n_q entries, each n_basis x dim
};

inline std::vector<std::pair<int, int>> simplex_edges(int dim) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i <= dim; ++i)
    for (int j = i + 1; j <= dim; ++j) e.emplace_back(i, j);
  return e;
}

inline ElementBasis tabulate_basis(int dim, int degree, const QuadratureRule& rule) {
  ElementBasis basis;
  basis.dim = dim;
  basis.degree = degree;
  const Index n_q = rule.points.rows();
  const auto edges = simplex_edges(dim);
  basis.n_basis = (degree == 1) ? (dim + 1) : (dim + 1 + static_cast<Index>(edges.size()));
  basis.values.resize(basis.n_basis, n_q);
  basis.ref_gradients.assign(static_cast<size_t>(n_q), Mat::Zero(basis.n_basis, dim));
  for (Index q = 0; q < n_q; ++q) {
    Vec lambda(dim + 1);
    lambda(0) = 1.0 - rule.points.row(q).sum();
    for (int i = 0; i < dim; ++i) lambda(i + 1) = rule.points(q, i);
    Mat grad_lambda = Mat::Zero(dim + 1, dim);  // d lambda_i / d xi_j
    grad_lambda.row(0).setConstant(-1.0);
    for (int i = 0; i < dim; ++i) grad_lambda(i + 1, i) = 1.0;
    Mat& G = basis.ref_gradients[static_cast<size_t>(q)];
    if (degree == 1) {
      for (int i = 0; i <= dim; ++i) {
        basis.values(i, q) = lambda(i);
        G.row(i) = grad_lambda.row(i);
      }
    } else {
      for (int i = 0; i <= dim; ++i) {
        basis.values(i, q) = lambda(i) * (2.0 * lambda(i) - 1.0);
        G.row(i) = (4.0 * lambda(i) - 1.0) * grad_lambda.row(i);
      }
      for (size_t e = 0; e < edges.size(); ++e) {
        auto [i, j] = edges[e];
        Index row = dim + 1 + static_cast<Index>(e);
        basis.values(row, q) = 4.0 * lambda(i) * lambda(j);
        G.row(row) = 4.0 * (lambda(j) * grad_lambda.row(i) + lambda(i) * grad_lambda.row(j));
      }
    }
  }
  return basis;
}

/// Affine geometry of one simplex: physical gradients and volume element.
struct CellGeometry {
  Mat jac;       // d x d
  Mat inv_jac_t; // d x d
  double det = 0.0;
};

inline CellGeometry cell_geometry(const Mat& vertices, const Eigen::MatrixXi& cells,
                                  int dim, Index c) {
  CellGeometry g;
  g.jac.resize(dim, dim);
  for (int j = 0; j < dim; ++j)
    g.jac.col(j) = (vertices.row(cells(c, j + 1)) - vertices.row(cells(c, 0))).transpose();
  g.det = g.jac.determinant();
  g.inv_jac_t = g.jac.inverse().transpose();
  return g;
}

}  // namespace fsis
