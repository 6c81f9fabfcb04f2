#pragma once

#include "simeval/features.hpp"
#include "simeval/image.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace simeval::divergence {

/// Jensen-Shannon divergence (nats) between two 1D samples on a shared equal-width grid over
/// the pooled range, bin count from stats::shared_bin_count.
double jsd_1d(std::span<const double> a, std::span<const double> b);

/// JSD between two already-normalized probability mass vectors on the same grid.
double jsd_pmf(std::span<const double> p, std::span<const double> q);

struct KnnOptions {
  int k = 5;
  std::uint64_t seed = 0;  ///< drives the pooled resampling that realizes the mixture sample
};

struct KnnDiagnostics {
  std::size_t jittered_distances = 0;  ///< zero distances replaced by 1e-12
  std::size_t dropped_columns = 0;     ///< zero-variance columns after pooling
};

/// k-nearest-neighbor JSD estimate (nats) between the distributions of the rows of a and b.
/// Columns are standardized with pooled mean/std; the mixture M is realized by drawing
/// ceil((n_a + n_b) / 2) pooled rows without replacement; KL(A||M) and KL(B||M) use the
/// kNN density-ratio estimator, never matching a point against itself. Clamped to [0, ln 2].
double jsd_knn(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const KnnOptions& options = {},
               KnnDiagnostics* diagnostics = nullptr);

/// kNN estimate of KL(P || Q) from samples of P and Q (rows), without standardization.
/// `exclude` optionally maps each P row to a Q row index treated as the same point.
double kl_knn(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q, int k,
              const std::vector<std::ptrdiff_t>* exclude = nullptr, std::size_t* jittered = nullptr);

struct PcaModel {
  features::Family family = features::Family::glcm;
  std::vector<std::size_t> columns;  ///< input columns used (zero-variance ones removed)
  Eigen::VectorXd means;
  Eigen::VectorXd scales;            ///< 1 when standardization is off
  Eigen::Matrix<double, Eigen::Dynamic, 2> components;
  Eigen::Vector2d explained_variance;
  std::size_t dropped_columns = 0;
};

/// PCA of the given columns of `data`: optional z-scoring, covariance eigendecomposition,
/// top two components with the largest-magnitude loading made positive.
PcaModel fit_pca(const Eigen::MatrixXd& data, std::span<const std::size_t> columns, bool standardize = true);

/// PCA over one texture family's columns of an n x 17 feature matrix.
PcaModel fit_pca(const Eigen::MatrixXd& feature_matrix, features::Family family, bool standardize = true);

/// n x 2 projection of the model's columns of `data` onto the two components.
Eigen::Matrix<double, Eigen::Dynamic, 2> project(const PcaModel& model, const Eigen::MatrixXd& data);

/// Total-variation distance between 2D histograms of two point sets on a shared
/// grid x grid lattice over their pooled bounding box.
double tv_distance_2d(const Eigen::Matrix<double, Eigen::Dynamic, 2>& a,
                      const Eigen::Matrix<double, Eigen::Dynamic, 2>& b, int grid = 64);

/// Squared Frechet distance between Gaussian fits (mean, unbiased covariance) of two row sets.
double frechet_features(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Closed-form squared Frechet distance between N(mu_a, cov_a) and N(mu_b, cov_b).
/// Throws NumericalError when the symmetrized product has an eigenvalue below -1e-8 (relative
/// to max(1, largest eigenvalue)).
double frechet_gaussian(const Eigen::VectorXd& mu_a, const Eigen::MatrixXd& cov_a, const Eigen::VectorXd& mu_b,
                        const Eigen::MatrixXd& cov_b);

/// Symmetric PSD square root by eigendecomposition; small negative eigenvalues clamp to 0.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m);

using EnsembleMetric = std::function<double(const Ensemble&, const Ensemble&)>;

/// Metric between the two halves of a seeded random split of e.
double noise_floor(const Ensemble& e, const EnsembleMetric& metric, std::uint64_t seed);

}  // namespace simeval::divergence
