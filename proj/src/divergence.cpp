#include "simeval/divergence.hpp"

#include "simeval/core.hpp"
#include "simeval/error.hpp"
#include "simeval/rng.hpp"
#include "simeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace simeval::divergence {

namespace {
const double kLn2 = std::numbers::ln2;
}

double jsd_pmf(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DataError("jsd: mass vectors differ in length");
  double kl_p = 0.0, kl_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) kl_p += p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) kl_q += q[i] * std::log(q[i] / m);
  }
  return std::clamp(0.5 * (kl_p + kl_q), 0.0, kLn2);
}

double jsd_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("jsd_1d: empty sample");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto [lo_it, hi_it] = std::minmax_element(pooled.begin(), pooled.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return 0.0;  // both samples are the same single value
  const auto bins = stats::shared_bin_count(pooled);
  auto masses = [&](std::span<const double> s) {
    const auto pdf = stats::histogram_density(s, lo, hi, bins);
    std::vector<double> mass(bins);
    for (std::size_t i = 0; i < bins; ++i) mass[i] = pdf.densities[i] * pdf.width(i);
    return mass;
  };
  const auto p = masses(a), q = masses(b);
  return jsd_pmf(p, q);
}

// --- kNN -------------------------------------------------------------------------------------

double kl_knn(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q, int k, const std::vector<std::ptrdiff_t>* exclude,
              std::size_t* jittered) {
  const auto n = p.rows(), m = q.rows(), d = p.cols();
  if (k < 1) throw ConfigError("kNN: k must be >= 1");
  if (q.cols() != d) throw DataError("kNN: column counts differ");
  if (n < k + 1 || m < k + 1) throw DataError("kNN: too few rows for the requested k");
  constexpr double kJitter = 1e-12;

  std::vector<double> dist_p(static_cast<std::size_t>(n)), dist_q(static_cast<std::size_t>(m));
  double log_sum = 0.0, log_m_sum = 0.0;
  std::size_t jitter_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd x = p.row(i);
    std::size_t np = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) dist_p[np++] = (p.row(j) - x).squaredNorm();
    }
    const std::ptrdiff_t skip = exclude ? (*exclude)[static_cast<std::size_t>(i)] : -1;
    std::size_t nq = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != skip) dist_q[nq++] = (q.row(j) - x).squaredNorm();
    }
    const auto kth = static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(dist_p.begin(), dist_p.begin() + kth, dist_p.begin() + static_cast<std::ptrdiff_t>(np));
    std::nth_element(dist_q.begin(), dist_q.begin() + kth, dist_q.begin() + static_cast<std::ptrdiff_t>(nq));
    double rho = std::sqrt(dist_p[static_cast<std::size_t>(kth)]);
    double nu = std::sqrt(dist_q[static_cast<std::size_t>(kth)]);
    if (rho <= 0.0) { rho = kJitter; ++jitter_count; }
    if (nu <= 0.0) { nu = kJitter; ++jitter_count; }
    log_sum += std::log(nu / rho);
    log_m_sum += std::log(static_cast<double>(nq) / static_cast<double>(n - 1));
  }
  if (jittered) *jittered += jitter_count;
  return static_cast<double>(d) * log_sum / static_cast<double>(n) + log_m_sum / static_cast<double>(n);
}

double jsd_knn(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const KnnOptions& options,
               KnnDiagnostics* diagnostics) {
  if (a.cols() != b.cols()) throw DataError("jsd_knn: column counts differ");
  if (a.rows() < options.k + 1 || b.rows() < options.k + 1) throw DataError("jsd_knn: too few rows for k");
  const auto na = a.rows(), nb = b.rows();
  Eigen::MatrixXd pooled(na + nb, a.cols());
  pooled << a, b;

  std::vector<Eigen::Index> keep;
  const Eigen::RowVectorXd mean = pooled.colwise().mean();
  Eigen::RowVectorXd scale(pooled.cols());
  for (Eigen::Index c = 0; c < pooled.cols(); ++c) {
    const double var = (pooled.col(c).array() - mean(c)).square().sum() / static_cast<double>(pooled.rows());
    scale(c) = std::sqrt(var);
    if (scale(c) > 0.0) keep.push_back(c);
  }
  KnnDiagnostics diag;
  diag.dropped_columns = static_cast<std::size_t>(pooled.cols()) - keep.size();
  if (keep.empty()) {
    if (diagnostics) *diagnostics = diag;
    return 0.0;  // every column constant and equal across both samples
  }
  Eigen::MatrixXd z(pooled.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    z.col(static_cast<Eigen::Index>(c)) = (pooled.col(keep[c]).array() - mean(keep[c])) / scale(keep[c]);
  }

  const auto total = static_cast<std::size_t>(na + nb);
  const std::size_t m = (total + 1) / 2;
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng(options.seed, 0x6D6978ULL);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(m);
  std::sort(order.begin(), order.end());

  Eigen::MatrixXd mix(static_cast<Eigen::Index>(m), z.cols());
  std::vector<std::ptrdiff_t> position(total, -1);
  for (std::size_t r = 0; r < m; ++r) {
    mix.row(static_cast<Eigen::Index>(r)) = z.row(static_cast<Eigen::Index>(order[r]));
    position[order[r]] = static_cast<std::ptrdiff_t>(r);
  }
  const std::vector<std::ptrdiff_t> exclude_a(position.begin(), position.begin() + na);
  const std::vector<std::ptrdiff_t> exclude_b(position.begin() + na, position.end());

  const double kl_a = kl_knn(z.topRows(na), mix, options.k, &exclude_a, &diag.jittered_distances);
  const double kl_b = kl_knn(z.bottomRows(nb), mix, options.k, &exclude_b, &diag.jittered_distances);
  if (diagnostics) *diagnostics = diag;
  return std::clamp(0.5 * (kl_a + kl_b), 0.0, kLn2);
}

// --- PCA -------------------------------------------------------------------------------------

PcaModel fit_pca(const Eigen::MatrixXd& data, std::span<const std::size_t> columns, bool standardize) {
  const auto n = data.rows();
  if (n < 3) throw DataError("fit_pca: need at least 3 rows");
  PcaModel model;
  std::vector<double> means, scales;
  for (auto c : columns) {
    const auto col = data.col(static_cast<Eigen::Index>(c));
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n - 1));
    if (standardize && !(sd > 0.0)) {
      ++model.dropped_columns;
      continue;
    }
    model.columns.push_back(c);
    means.push_back(mean);
    scales.push_back(standardize ? sd : 1.0);
  }
  const auto d = static_cast<Eigen::Index>(model.columns.size());
  if (d < 2) throw NumericalError("fit_pca: fewer than two columns with non-zero variance");
  model.means = Eigen::Map<const Eigen::VectorXd>(means.data(), d);
  model.scales = Eigen::Map<const Eigen::VectorXd>(scales.data(), d);

  Eigen::MatrixXd z(n, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    z.col(c) = (data.col(static_cast<Eigen::Index>(model.columns[static_cast<std::size_t>(c)])).array() -
                model.means(c)) / model.scales(c);
  }
  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw NumericalError("fit_pca: eigendecomposition failed");

  model.components.resize(d, 2);
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    model.components.col(k) = v;
    model.explained_variance(k) = std::max(0.0, solver.eigenvalues()(d - 1 - k));
  }
  return model;
}

PcaModel fit_pca(const Eigen::MatrixXd& feature_matrix, features::Family family, bool standardize) {
  const auto cols = features::family_columns(family);
  auto model = fit_pca(feature_matrix, std::span<const std::size_t>(cols), standardize);
  model.family = family;
  return model;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> project(const PcaModel& model, const Eigen::MatrixXd& data) {
  const auto d = static_cast<Eigen::Index>(model.columns.size());
  Eigen::MatrixXd z(data.rows(), d);
  for (Eigen::Index c = 0; c < d; ++c) {
    z.col(c) = (data.col(static_cast<Eigen::Index>(model.columns[static_cast<std::size_t>(c)])).array() -
                model.means(c)) / model.scales(c);
  }
  return z * model.components;
}

// --- TV --------------------------------------------------------------------------------------

double tv_distance_2d(const Eigen::Matrix<double, Eigen::Dynamic, 2>& a, const Eigen::Matrix<double, Eigen::Dynamic, 2>& b,
                      int grid) {
  if (a.rows() == 0 || b.rows() == 0) throw DataError("tv_distance_2d: empty sample");
  if (grid < 1) throw ConfigError("tv_distance_2d: grid must be >= 1");
  Eigen::Vector2d lo = a.colwise().minCoeff().cwiseMin(b.colwise().minCoeff()).transpose();
  Eigen::Vector2d hi = a.colwise().maxCoeff().cwiseMax(b.colwise().maxCoeff()).transpose();
  for (int k = 0; k < 2; ++k) {
    if (!(hi(k) > lo(k))) {
      lo(k) -= 0.5;
      hi(k) += 0.5;
    }
  }
  const Eigen::Vector2d width = (hi - lo) / static_cast<double>(grid);
  auto histogram = [&](const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(grid, grid);
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      const auto ix = std::min<Eigen::Index>(static_cast<Eigen::Index>((pts(r, 0) - lo(0)) / width(0)), grid - 1);
      const auto iy = std::min<Eigen::Index>(static_cast<Eigen::Index>((pts(r, 1) - lo(1)) / width(1)), grid - 1);
      h(iy, ix) += 1.0;
    }
    return Eigen::MatrixXd(h / static_cast<double>(pts.rows()));
  };
  return std::min(1.0, 0.5 * (histogram(a) - histogram(b)).cwiseAbs().sum());
}

// --- Frechet ---------------------------------------------------------------------------------

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("sqrtm: eigendecomposition failed");
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

double frechet_gaussian(const Eigen::VectorXd& mu_a, const Eigen::MatrixXd& cov_a, const Eigen::VectorXd& mu_b,
                        const Eigen::MatrixXd& cov_b) {
  if (mu_a.size() != mu_b.size() || cov_a.rows() != mu_a.size() || cov_b.rows() != mu_b.size()) {
    throw DataError("frechet: dimension mismatch");
  }
  // Tr((A B)^{1/2}) = Tr((A^{1/2} B A^{1/2})^{1/2}); the inner product is symmetric PSD.
  const Eigen::MatrixXd root_a = sqrtm_psd(cov_a);
  Eigen::MatrixXd inner = root_a * cov_b * root_a;
  inner = 0.5 * (inner + inner.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inner, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("frechet: eigendecomposition failed");
  const Eigen::VectorXd& eig = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(eig.maxCoeff()));
  if (eig.minCoeff() < -1e-8 * scale) throw NumericalError("frechet: covariance product is not positive semidefinite");
  const double trace_sqrt = eig.cwiseMax(0.0).cwiseSqrt().sum();
  const double d2 = (mu_a - mu_b).squaredNorm() + cov_a.trace() + cov_b.trace() - 2.0 * trace_sqrt;
  return std::max(0.0, d2);
}

double frechet_features(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() < 2 || b.rows() < 2) throw NumericalError("frechet: covariance needs at least 2 rows");
  if (a.cols() != b.cols()) throw DataError("frechet: column counts differ");
  auto fit = [](const Eigen::MatrixXd& x) {
    const Eigen::VectorXd mu = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - mu.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
    return std::make_pair(mu, cov);
  };
  const auto [mu_a, cov_a] = fit(a);
  const auto [mu_b, cov_b] = fit(b);
  return frechet_gaussian(mu_a, cov_a, mu_b, cov_b);
}

// --- noise floor -----------------------------------------------------------------------------

double noise_floor(const Ensemble& e, const EnsembleMetric& metric, std::uint64_t seed) {
  if (e.size() < 4) throw DataError("noise_floor: need at least 4 images");
  const auto [first, second] = split_halves(e, seed);
  return metric(first, second);
}

}  // namespace simeval::divergence
