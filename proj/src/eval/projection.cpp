/*
 * Copyright 2026 The Harmonize Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "harmonize/eval/projection.hpp"

#include <Eigen/Eigenvalues>

#include "harmonize/error.hpp"

namespace harmonize::eval {

PcaBasis fit_pca(const Matrix& features, int components) {
  if (features.rows() < 2) throw DataError("PCA needs at least two rows");
  if (components < 1 || components > features.cols()) {
    throw ConfigError("PCA component count out of range");
  }
  PcaBasis basis;
  basis.mean = features.colwise().mean().transpose();
  const Matrix centered = features.rowwise() - basis.mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(features.rows() - 1);
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  const auto n = features.cols();
  basis.axes.resize(n, components);
  for (int c = 0; c < components; ++c) {
    Vector axis = solver.eigenvectors().col(n - 1 - c);  // eigenvalues ascend
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    basis.axes.col(c) = axis;
  }
  return basis;
}

Matrix project(const PcaBasis& basis, const Matrix& features) {
  if (features.cols() != basis.mean.size()) {
    throw ConfigError("PCA basis and features differ in width");
  }
  return (features.rowwise() - basis.mean.transpose()) * basis.axes;
}

}  // namespace harmonize::eval
