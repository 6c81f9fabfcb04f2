#pragma once

#include "simeval/features.hpp"
#include "simeval/image.hpp"
#include "simeval/stats.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace simeval::report {

struct FgBands {
  double fat_value;
  double gland_value;
  double tolerance;
};

enum class TextureInput {
  quantized,  ///< features from the 8-bit ensemble quantization (skipped if already quantized)
  raw,
};

/// Settings of the evaluation battery.
struct EvalConfig {
  features::Params features;
  TextureInput texture_input = TextureInput::quantized;
  std::size_t gray_level_bins = 128;
  int knn_k = 5;
  int tv_grid = 64;
  std::uint64_t floor_seed = 1;
  stats::PixelKind pixel_kind = stats::PixelKind::envelope;
  std::optional<FgBands> fg;

  void validate() const;
};

void to_json(nlohmann::json& j, const EvalConfig& c);
void from_json(const nlohmann::json& j, EvalConfig& c);

struct ImageSummary {
  std::optional<stats::SpeckleStats> speckle;  ///< empty for a constant image
  features::FeatureVector features;
  std::optional<stats::FgRatio> fg;
  double min;
  double max;
};

/// Per-image statistics of an ensemble, computed once and shared by every metric and floor.
/// Keeps a reference to the ensemble for the pooled gray-level statistic.
struct EnsembleSummary {
  const Ensemble* ensemble = nullptr;
  std::vector<ImageSummary> images;

  std::size_t size() const { return images.size(); }
};

EnsembleSummary summarize(const Ensemble& e, const EvalConfig& cfg, int threads = 1);

struct MetricSet {
  std::map<std::string, double> jsd_by_statistic;
  std::map<std::string, double> tv_by_family;
  std::optional<double> frechet_features;
  std::optional<double> knn_jsd;
};

struct ComparisonReport {
  MetricSet metrics;
  MetricSet noise_floors;      ///< same metrics between two random halves of the reference
  std::string worst_family;    ///< family with the largest TV distance
  nlohmann::json metadata;
};

/// Smallest ensemble `compare` accepts: each floor half must support the kNN estimator.
std::size_t minimum_ensemble_size(const EvalConfig& cfg);

/// Full battery between reference `a` and candidate `b`, with noise floors from `a`.
/// Throws DataError on a dimension mismatch or an ensemble below minimum_ensemble_size.
ComparisonReport compare(const EnsembleSummary& a, const EnsembleSummary& b, const EvalConfig& cfg);

/// Metrics between row subsets of two summaries. Frechet features are z-scored with the
/// statistics of `scaling` (all of its complete rows).
MetricSet metrics(const EnsembleSummary& a, std::span<const std::size_t> rows_a, const EnsembleSummary& b,
                  std::span<const std::size_t> rows_b, const EnsembleSummary& scaling, const EvalConfig& cfg);

nlohmann::json to_json(const MetricSet& m);
nlohmann::json to_json(const ComparisonReport& r);

// --- plot data -------------------------------------------------------------------------------

struct Projection {
  features::Family family;
  Eigen::Matrix<double, Eigen::Dynamic, 2> a;
  Eigen::Matrix<double, Eigen::Dynamic, 2> b;
};

struct PlotData {
  stats::Pdf1D gray_a, gray_b;
  stats::RadialProfile acf_a, acf_b;
  stats::Pdf1D snr2_a, snr2_b;
  std::vector<Projection> projections;
};

PlotData plot_data(const EnsembleSummary& a, const EnsembleSummary& b, const EvalConfig& cfg, int threads = 1);

/// Writes gray_level_pdf.csv, autocorrelation_radial.csv, snr2_pdf.csv and pca_<family>.csv.
void write_plot_csvs(const PlotData& p, const std::filesystem::path& dir);

// --- tables ----------------------------------------------------------------------------------

inline constexpr const char* kNullMarker = "NA";

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// One row per image: index, label, the 17 features, speckle statistics and F:G columns.
/// Undefined values are written as kNullMarker. `header_comment` lines are prefixed with '#'.
void write_feature_csv(std::ostream& out, const Ensemble& e, const EnsembleSummary& s,
                       const std::string& header_comment);

}  // namespace simeval::report
