#pragma once

#include "simeval/image.hpp"

#include <optional>
#include <span>
#include <vector>

namespace simeval::stats {

// --- speckle statistics ---------------------------------------------------------------------

/// Per-image intensity statistics. n_hat is empty when snr2 >= 1 (saturated).
struct SpeckleStats {
  double mu_I;
  double sigma_I;
  double snr2;
  std::optional<double> n_hat;

  bool saturated() const { return !n_hat.has_value(); }
};

/// SNR^2 / (1 - SNR^2), empty when snr2 >= 1.
std::optional<double> n_hat_from_snr2(double snr2);

enum class PixelKind {
  envelope,   ///< intensity is the squared pixel value
  intensity,  ///< pixels already are intensities
};

/// Whole-image intensity mean/std (population) and the derived SNR^2 and N-hat.
/// Throws NumericalError for a constant image.
SpeckleStats snr_stats(const Image& img, PixelKind kind = PixelKind::envelope);

// --- 1D densities ----------------------------------------------------------------------------

struct Pdf1D {
  std::vector<double> bin_edges;
  std::vector<double> densities;

  std::size_t bins() const { return densities.size(); }
  double center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
};

/// Density histogram of `samples` over [lo, hi] with equal-width bins; values outside are
/// ignored and the density integrates to 1 over the in-range samples.
Pdf1D histogram_density(std::span<const double> samples, double lo, double hi, std::size_t bins);

/// Pooled-pixel density histogram over the ensemble's [min, max]. A constant ensemble puts all
/// mass in a single bin.
Pdf1D gray_level_pdf(const Ensemble& e, std::size_t bins);
Pdf1D gray_level_pdf(const Ensemble& e, std::size_t bins, double lo, double hi);

/// Local maxima of the density whose height is at least `min_height_fraction` of the global
/// maximum and that are separated from any higher peak by a dip below `max_valley_fraction` of
/// the lower peak. Returns bin centers in increasing order.
std::vector<double> find_peaks(const Pdf1D& pdf, double min_height_fraction = 0.05,
                               double max_valley_fraction = 0.5);

// --- autocorrelation -------------------------------------------------------------------------

/// Papoulis taper on t in [-1, 1].
template <typename Scalar>
Scalar papoulis(Scalar t) {
  using std::abs, std::sin, std::cos;
  constexpr Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  const Scalar a = abs(t);
  if (a >= Scalar(1)) return Scalar(0);
  return abs(sin(pi * t)) / pi + (Scalar(1) - a) * cos(pi * t);
}

/// Separable n x n Papoulis window, u and v sampled uniformly on [-1, 1] edge to edge.
Grid papoulis_window(Eigen::Index n);
Grid papoulis_window(Eigen::Index rows, Eigen::Index cols);

/// Window-corrected autocorrelation of one image: the windowed-mean-subtracted, windowed image
/// is autocorrelated (linear lags, via zero-padded FFT) and divided by the autocorrelation of
/// the window, whose value is clamped below at 1e-3 of its peak. Returned as a
/// (2*rows-1) x (2*cols-1) grid with zero lag at (rows-1, cols-1). Not peak-normalized.
Grid windowed_autocorrelation(const Image& img);

/// Ensemble average of windowed_autocorrelation, normalized to 1 at zero lag.
/// Throws NumericalError for a zero-variance ensemble.
Grid autocorrelation_2d(const Ensemble& e, int threads = 1);

struct RadialProfile {
  std::vector<double> radii;
  std::vector<double> values;
};

/// Averages a centered lag grid over integer-radius annuli (round(|lag|)), r = 0 .. min(rows, cols)/2 of
/// the original image.
RadialProfile radial_profile(const Grid& lag_grid);

/// Papoulis-windowed, ensemble-averaged radial autocorrelation; values[0] == 1.
RadialProfile autocorrelation_radial(const Ensemble& e, int threads = 1);

/// Lag (in pixels, linearly interpolated) at which the centered lag grid first drops below
/// `level` along the direction `angle` (radians, 0 = +x).
double correlation_length(const Grid& lag_grid, double angle, double level = 0.5);

/// Ratio of principal correlation lengths (major / minor) of an image's autocorrelation,
/// from the second-moment tensor of the central lobe above `level`.
double autocorrelation_anisotropy(const Image& img, double level = 0.5);

// --- Gaussian fit ----------------------------------------------------------------------------

struct GaussianFit {
  double mu;
  double sigma;
  double mse;
  std::size_t bins;
};

/// Moment fit (population std) and the mean squared error between the sample density histogram
/// (the shared bin rule) and the fitted density at bin centers. Throws NumericalError on zero variance.
GaussianFit gaussian_fit(std::span<const double> samples);

// --- fat-to-glandular ratio ------------------------------------------------------------------

struct FgRatio {
  double f_fraction;
  double g_fraction;
  std::optional<double> log_ratio;  ///< ln(F/G); empty when F or G is 0
};

/// Pixels within +-tolerance of the fat / glandular values. Throws ConfigError if the two
/// tolerance bands overlap.
FgRatio fg_ratio(const Image& img, double fat_value, double gland_value, double tolerance);

// --- helpers ---------------------------------------------------------------------------------

struct Moments {
  double mean;
  double variance;  ///< population
};

Moments moments(std::span<const double> values);

/// Bin count shared by the histogram-based estimators: max(32, Freedman-Diaconis) on the pooled
/// sample, capped at 4096. Returns 32 when the interquartile range is 0.
std::size_t shared_bin_count(std::span<const double> pooled);

}  // namespace simeval::stats
