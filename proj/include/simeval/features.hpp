#pragma once

#include "simeval/image.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace simeval::features {

enum class NgtdmNormalization {
  interior,  ///< n = number of interior pixels with a full neighborhood
  total,     ///< n = all image pixels
};

struct Params {
  int gray_levels = 16;
  std::vector<int> glcm_distances{1, 2, 4};
  std::vector<int> glcm_angles{0, 45, 90, 135};  ///< degrees, multiples of 45
  std::vector<int> glrm_directions{0, 90};       ///< degrees, multiples of 45
  int ngtdm_distance = 1;
  NgtdmNormalization ngtdm_normalization = NgtdmNormalization::interior;

  void validate() const;
};

/// Integer gray-level image, values in [0, gray_levels).
using LevelGrid = GridT<int>;

/// Equal-width bins over the image's own [min, max]; a constant image maps to level 0.
LevelGrid quantize(const Image& img, int gray_levels);

/// (row, col) step for a direction in degrees: 0 -> +x, 45 -> up-right, 90 -> up, 135 -> up-left.
std::array<int, 2> direction_step(int degrees);

// --- first order -----------------------------------------------------------------------------

struct FirstOrder {
  double mean;
  double std;
  std::optional<double> skewness;  ///< empty for a constant image
  std::optional<double> kurtosis;  ///< non-excess; empty for a constant image
};

FirstOrder first_order(const Image& img);

// --- GLCM ------------------------------------------------------------------------------------

/// Symmetric co-occurrence matrix, pair counts pooled over all (distance, angle) offsets and
/// normalized to sum 1.
Eigen::MatrixXd glcm(const Image& img, const Params& params);
Eigen::MatrixXd glcm(const LevelGrid& levels, const Params& params);

struct GlcmFeatures {
  double energy;
  double entropy;
  double maximum;
  double contrast;
  double homogeneity;
};

GlcmFeatures glcm_features(const Eigen::MatrixXd& p);

// --- GLRM ------------------------------------------------------------------------------------

/// Run-length matrix, rows = gray level, cols = run length - 1, counts summed over directions.
Eigen::MatrixXd glrm_matrix(const LevelGrid& levels, const Params& params);

struct GlrmFeatures {
  double spe;  ///< short primitive emphasis
  double lpe;  ///< long primitive emphasis
  double glu;  ///< gray-level uniformity
  double plu;  ///< primitive-length uniformity
};

GlrmFeatures glrm_features(const Eigen::MatrixXd& runs);
GlrmFeatures glrm(const Image& img, const Params& params);

// --- NGTDM -----------------------------------------------------------------------------------

inline constexpr double kNgtdmEpsilon = 1e-9;

struct NgtdmFeatures {
  double coarseness;  ///< 1/epsilon when the image has no gray-tone differences
  double contrast;
  double complexity;
  double strength;
};

NgtdmFeatures ngtdm(const Image& img, const Params& params);
NgtdmFeatures ngtdm(const LevelGrid& levels, const Params& params);

// --- full vector -----------------------------------------------------------------------------

inline constexpr std::size_t kFeatureCount = 17;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "mean",           "std",           "skewness",        "kurtosis",       "glcm_energy",
    "glcm_entropy",   "glcm_maximum",  "glcm_contrast",   "glcm_homogeneity", "glrm_spe",
    "glrm_lpe",       "glrm_glu",      "glrm_plu",        "ngtdm_coarseness", "ngtdm_contrast",
    "ngtdm_complexity", "ngtdm_strength"};

enum class Family { first_order, glcm, glrm, ngtdm };

/// Column indices of a family within FeatureVector::values().
std::vector<std::size_t> family_columns(Family family);
std::string_view family_name(Family family);

struct FeatureVector {
  FirstOrder first;
  GlcmFeatures glcm;
  GlrmFeatures glrm;
  NgtdmFeatures ngtdm;

  /// The 17 values in kFeatureNames order; undefined moments are empty.
  std::array<std::optional<double>, kFeatureCount> values() const;
  bool complete() const { return first.skewness.has_value() && first.kurtosis.has_value(); }
};

FeatureVector feature_vector(const Image& img, const Params& params);

/// Per-image feature vectors for an ensemble; image order preserved.
std::vector<FeatureVector> extract(const Ensemble& e, const Params& params, int threads = 1);

/// Rows of complete vectors (constant images dropped) as an n x 17 matrix; `kept` receives the
/// source row indices when non-null.
Eigen::MatrixXd to_matrix(const std::vector<FeatureVector>& vectors, std::vector<std::size_t>* kept = nullptr);

}  // namespace simeval::features
