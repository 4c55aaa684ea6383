#include "leakwatch/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "leakwatch/error.hpp"

namespace leakwatch {

Embedding pca_fit_transform(const std::vector<double>& matrix, std::size_t rows,
                            std::size_t cols, double variance_target) {
  if (rows < 2) throw Error(ErrorKind::DegenerateInput, "PCA needs >= 2 rows");
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw Error(ErrorKind::ConfigError, "variance_target must be in (0,1]");
  }
  if (matrix.size() != rows * cols || cols == 0) {
    throw Error(ErrorKind::DegenerateInput, "matrix size does not match rows*cols");
  }

  Eigen::MatrixXd x(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = matrix[i * cols + j];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  Embedding out;
  out.n = rows;

  const double total_variance = x.squaredNorm();
  if (total_variance <= 0.0) {
    out.dims = 1;
    out.coords.assign(rows, 0.0);
    out.explained_variance_ratio = {1.0};
    return out;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  std::size_t dims_needed = 1;
  double cumulative = 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    cumulative += sigma(k) * sigma(k);
    dims_needed = static_cast<std::size_t>(k) + 1;
    if (cumulative / total_variance >= variance_target) break;
  }
  const std::size_t cap = std::min<std::size_t>(rows - 1, kMaxPcaDims);
  const std::size_t dims = std::max<std::size_t>(1, std::min(dims_needed, cap));

  Eigen::MatrixXd coords = x * svd.matrixV().leftCols(static_cast<Eigen::Index>(dims));

  // Per-component sign convention: the largest-magnitude loading is positive.
  for (std::size_t d = 0; d < dims; ++d) {
    const auto col = svd.matrixV().col(static_cast<Eigen::Index>(d));
    Eigen::Index argmax = 0;
    col.cwiseAbs().maxCoeff(&argmax);
    if (col(argmax) < 0.0) coords.col(static_cast<Eigen::Index>(d)) *= -1.0;
  }

  out.dims = dims;
  out.coords.resize(rows * dims);
  out.explained_variance_ratio.resize(dims);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      out.coords[i * dims + d] = coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
    }
  }
  for (std::size_t d = 0; d < dims; ++d) {
    const double s = sigma(static_cast<Eigen::Index>(d));
    out.explained_variance_ratio[d] = s * s / total_variance;
  }
  return out;
}

}  // namespace leakwatch
