#include "simeval/features.hpp"

#include "simeval/error.hpp"
#include "simeval/parallel.hpp"

#include <cmath>

namespace simeval::features {

void Params::validate() const {
  if (gray_levels < 2) throw ConfigError("features: gray_levels must be >= 2");
  if (glcm_distances.empty() || glcm_angles.empty() || glrm_directions.empty()) {
    throw ConfigError("features: distance/angle/direction lists must be non-empty");
  }
  for (int d : glcm_distances) {
    if (d < 1) throw ConfigError("features: GLCM distances must be >= 1");
  }
  for (int a : glcm_angles) direction_step(a);
  for (int a : glrm_directions) direction_step(a);
  if (ngtdm_distance < 1) throw ConfigError("features: NGTDM neighborhood half-width must be >= 1");
}

std::array<int, 2> direction_step(int degrees) {
  switch (((degrees % 360) + 360) % 360) {
    case 0: return {0, 1};
    case 45: return {-1, 1};
    case 90: return {-1, 0};
    case 135: return {-1, -1};
    case 180: return {0, -1};
    case 225: return {1, -1};
    case 270: return {1, 0};
    case 315: return {1, 1};
    default: throw ConfigError("features: directions must be multiples of 45 degrees");
  }
}

LevelGrid quantize(const Image& img, int gray_levels) {
  if (gray_levels < 2) throw ConfigError("features: gray_levels must be >= 2");
  const double lo = img.data.minCoeff(), hi = img.data.maxCoeff();
  LevelGrid out = LevelGrid::Zero(img.height(), img.width());
  if (!(hi > lo)) return out;
  const double scale = static_cast<double>(gray_levels) / (hi - lo);
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const auto level = static_cast<int>(std::floor((img.data.data()[i] - lo) * scale));
    out.data()[i] = std::min(level, gray_levels - 1);
  }
  return out;
}

// --- first order -----------------------------------------------------------------------------

FirstOrder first_order(const Image& img) {
  if (img.size() == 0) throw DataError("first_order: empty image");
  const auto n = static_cast<double>(img.size());
  CompensatedSum s1;
  for (Eigen::Index i = 0; i < img.size(); ++i) s1.add(img.data.data()[i]);
  const double mean = s1.value() / n;
  CompensatedSum s2, s3, s4;
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double d = img.data.data()[i] - mean;
    s2.add(d * d);
    s3.add(d * d * d);
    s4.add(d * d * d * d);
  }
  const double m2 = s2.value() / n, m3 = s3.value() / n, m4 = s4.value() / n;
  FirstOrder out{mean, std::sqrt(m2), std::nullopt, std::nullopt};
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
  }
  return out;
}

// --- GLCM ------------------------------------------------------------------------------------

Eigen::MatrixXd glcm(const LevelGrid& levels, const Params& params) {
  params.validate();
  const int g = params.gray_levels;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(g, g);
  const auto rows = levels.rows(), cols = levels.cols();
  for (int d : params.glcm_distances) {
    for (int angle : params.glcm_angles) {
      const auto step = direction_step(angle);
      const Eigen::Index dr = step[0] * d, dc = step[1] * d;
      for (Eigen::Index r = std::max<Eigen::Index>(0, -dr); r < std::min(rows, rows - dr); ++r) {
        for (Eigen::Index c = std::max<Eigen::Index>(0, -dc); c < std::min(cols, cols - dc); ++c) {
          const int a = levels(r, c), b = levels(r + dr, c + dc);
          counts(a, b) += 1.0;
          counts(b, a) += 1.0;
        }
      }
    }
  }
  const double total = counts.sum();
  if (!(total > 0.0)) throw DataError("glcm: image too small for the requested offsets");
  return counts / total;
}

Eigen::MatrixXd glcm(const Image& img, const Params& params) { return glcm(quantize(img, params.gray_levels), params); }

GlcmFeatures glcm_features(const Eigen::MatrixXd& p) {
  GlcmFeatures f{0.0, 0.0, 0.0, 0.0, 0.0};
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      const auto diff = static_cast<double>(i - j);
      f.energy += v * v;
      if (v > 0.0) f.entropy -= v * std::log(v);
      f.maximum = std::max(f.maximum, v);
      f.contrast += v * diff * diff;
      f.homogeneity += v / (1.0 + std::abs(diff));
    }
  }
  return f;
}

// --- GLRM ------------------------------------------------------------------------------------

Eigen::MatrixXd glrm_matrix(const LevelGrid& levels, const Params& params) {
  params.validate();
  const auto rows = levels.rows(), cols = levels.cols();
  Eigen::MatrixXd runs = Eigen::MatrixXd::Zero(params.gray_levels, std::max(rows, cols));
  auto inside = [&](Eigen::Index r, Eigen::Index c) { return r >= 0 && c >= 0 && r < rows && c < cols; };
  for (int direction : params.glrm_directions) {
    const auto step = direction_step(direction);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        const int level = levels(r, c);
        const Eigen::Index pr = r - step[0], pc = c - step[1];
        if (inside(pr, pc) && levels(pr, pc) == level) continue;  // not a run start
        Eigen::Index length = 1;
        for (Eigen::Index nr = r + step[0], nc = c + step[1]; inside(nr, nc) && levels(nr, nc) == level;
             nr += step[0], nc += step[1]) {
          ++length;
        }
        runs(level, length - 1) += 1.0;
      }
    }
  }
  return runs;
}

GlrmFeatures glrm_features(const Eigen::MatrixXd& runs) {
  const double s = runs.sum();
  if (!(s > 0.0)) throw DataError("glrm: empty run-length matrix");
  double spe = 0.0, lpe = 0.0;
  for (Eigen::Index g = 0; g < runs.rows(); ++g) {
    for (Eigen::Index k = 0; k < runs.cols(); ++k) {
      const auto r = static_cast<double>(k + 1);
      spe += runs(g, k) / (r * r);
      lpe += runs(g, k) * r * r;
    }
  }
  const double glu = runs.rowwise().sum().squaredNorm();
  const double plu = runs.colwise().sum().squaredNorm();
  return {spe / s, lpe / s, glu / s, plu / s};
}

GlrmFeatures glrm(const Image& img, const Params& params) {
  return glrm_features(glrm_matrix(quantize(img, params.gray_levels), params));
}

// --- NGTDM -----------------------------------------------------------------------------------

NgtdmFeatures ngtdm(const LevelGrid& levels, const Params& params) {
  params.validate();
  const int d = params.ngtdm_distance;
  const auto rows = levels.rows(), cols = levels.cols();
  if (rows <= 2 * d + 1 || cols <= 2 * d + 1) throw DataError("ngtdm: image smaller than the neighborhood");
  const int g = params.gray_levels;
  const double neighbors = static_cast<double>((2 * d + 1) * (2 * d + 1) - 1);

  std::vector<double> s(static_cast<std::size_t>(g), 0.0);
  std::vector<double> count(static_cast<std::size_t>(g), 0.0);
  double interior = 0.0;
  for (Eigen::Index r = d; r < rows - d; ++r) {
    for (Eigen::Index c = d; c < cols - d; ++c) {
      const int level = levels(r, c);
      const double total = static_cast<double>(levels.block(r - d, c - d, 2 * d + 1, 2 * d + 1).sum()) - level;
      s[static_cast<std::size_t>(level)] += std::abs(level - total / neighbors);
      count[static_cast<std::size_t>(level)] += 1.0;
      interior += 1.0;
    }
  }
  const double n = params.ngtdm_normalization == NgtdmNormalization::interior
                       ? interior
                       : static_cast<double>(rows * cols);

  std::vector<int> occupied;
  for (int i = 0; i < g; ++i) {
    if (count[static_cast<std::size_t>(i)] > 0.0) occupied.push_back(i);
  }
  std::vector<double> p(static_cast<std::size_t>(g), 0.0);
  double weighted_s = 0.0, sum_s = 0.0;
  for (int i : occupied) {
    const auto k = static_cast<std::size_t>(i);
    p[k] = count[k] / interior;
    weighted_s += p[k] * s[k];
    sum_s += s[k];
  }

  double pair_contrast = 0.0, complexity = 0.0, strength = 0.0;
  for (int i : occupied) {
    for (int j : occupied) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      const double diff = static_cast<double>(i - j);
      pair_contrast += p[a] * p[b] * diff * diff;
      complexity += std::abs(diff) * (p[a] * s[a] + p[b] * s[b]) / (n * (p[a] + p[b]));
      strength += (p[a] + p[b]) * diff * diff;
    }
  }
  const auto ng = static_cast<double>(occupied.size());
  NgtdmFeatures f{};
  f.coarseness = 1.0 / (kNgtdmEpsilon + weighted_s);
  f.contrast = ng > 1.0 ? pair_contrast / (ng * (ng - 1.0)) * (sum_s / n) : 0.0;
  f.complexity = complexity;
  f.strength = strength / (kNgtdmEpsilon + sum_s);
  return f;
}

NgtdmFeatures ngtdm(const Image& img, const Params& params) { return ngtdm(quantize(img, params.gray_levels), params); }

// --- vector ----------------------------------------------------------------------------------

std::vector<std::size_t> family_columns(Family family) {
  switch (family) {
    case Family::first_order: return {0, 1, 2, 3};
    case Family::glcm: return {4, 5, 6, 7, 8};
    case Family::glrm: return {9, 10, 11, 12};
    case Family::ngtdm: return {13, 14, 15, 16};
  }
  return {};
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::first_order: return "first_order";
    case Family::glcm: return "GLCM";
    case Family::glrm: return "GLRM";
    case Family::ngtdm: return "NGTDM";
  }
  return "";
}

std::array<std::optional<double>, kFeatureCount> FeatureVector::values() const {
  return {first.mean,       first.std,        first.skewness,   first.kurtosis,    glcm.energy,      glcm.entropy,
          glcm.maximum,     glcm.contrast,    glcm.homogeneity, glrm.spe,          glrm.lpe,         glrm.glu,
          glrm.plu,         ngtdm.coarseness, ngtdm.contrast,   ngtdm.complexity,  ngtdm.strength};
}

FeatureVector feature_vector(const Image& img, const Params& params) {
  params.validate();
  const auto levels = quantize(img, params.gray_levels);
  FeatureVector v;
  v.first = first_order(img);
  v.glcm = glcm_features(glcm(levels, params));
  v.glrm = glrm_features(glrm_matrix(levels, params));
  v.ngtdm = ngtdm(levels, params);
  return v;
}

std::vector<FeatureVector> extract(const Ensemble& e, const Params& params, int threads) {
  params.validate();
  std::vector<FeatureVector> out(e.size());
  parallel_for(e.size(), threads, [&](std::size_t i) { out[i] = feature_vector(e[i], params); });
  return out;
}

Eigen::MatrixXd to_matrix(const std::vector<FeatureVector>& vectors, std::vector<std::size_t>* kept) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].complete()) rows.push_back(i);
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto vals = vectors[rows[r]].values();
    for (std::size_t c = 0; c < kFeatureCount; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *vals[c];
  }
  if (kept) *kept = std::move(rows);
  return m;
}

}  // namespace simeval::features
