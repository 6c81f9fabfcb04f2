#pragma once

#include "simeval/image.hpp"
#include "simeval/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace simeval::clb {

enum class Orientation {
  isotropic,  ///< each blob draws its own angle
  oriented,   ///< all blobs of a cluster share the cluster's angle
};

/// One layer of clustered blobs. Lengths are in pixels.
struct Layer {
  double mean_clusters = 20.0;  ///< Poisson mean of clusters per image
  double mean_blobs = 10.0;     ///< Poisson mean of blobs per cluster
  double cluster_spread = 10.0; ///< std of the isotropic Gaussian blob offset around a cluster center
  double blob_scale_x = 5.0;    ///< Lx
  double blob_scale_y = 2.0;    ///< Ly
  double alpha = 2.1;
  double beta = 0.5;
  Orientation orientation = Orientation::isotropic;
  double amplitude = 1.0;
};

struct Config {
  int image_size = 256;
  double dc_offset = 0.0;
  /// Blobs are evaluated out to the radius where the profile falls below this fraction of the
  /// peak. Relative, so generated images stay exactly linear in the amplitudes.
  double support_floor = 1e-3;
  std::vector<Layer> layers{Layer{}};

  void validate() const;
};

/// Gaussian blur followed by an ideal (square) low-pass filter.
struct DegradeConfig {
  double blur_sigma = 1.0;           ///< pixels
  double lpf_cutoff_fraction = 0.5;  ///< fraction of the Nyquist frequency kept on each axis

  void validate() const;
};

/// amplitude * exp(-alpha * r^beta), with r the anisotropically scaled radius of (dx, dy)
/// after rotating by -angle.
template <typename Scalar>
Scalar blob_profile(Scalar dx, Scalar dy, const Layer& layer, Scalar angle) {
  using std::cos, std::sin, std::sqrt, std::pow, std::exp;
  const Scalar c = cos(angle), s = sin(angle);
  const Scalar u = (c * dx + s * dy) / Scalar(layer.blob_scale_x);
  const Scalar v = (-s * dx + c * dy) / Scalar(layer.blob_scale_y);
  const Scalar r = sqrt(u * u + v * v);
  return Scalar(layer.amplitude) * exp(-Scalar(layer.alpha) * pow(r, Scalar(layer.beta)));
}

struct Sample {
  Image image;
  std::size_t clusters = 0;
  std::size_t blobs = 0;
};

/// One CLB realization with the draw counts that produced it.
Sample generate_sample(const Config& cfg, RngStream& rng);

inline Image generate(const Config& cfg, RngStream& rng) { return generate_sample(cfg, rng).image; }

/// Ensemble of n images; image i uses rng.split(i), so the result does not depend on `threads`.
Ensemble generate_ensemble(const Config& cfg, std::size_t n, const RngStream& rng, int threads = 1);

Image degrade(const Image& img, const DegradeConfig& d);

inline const std::string kRegular = "regular";
inline const std::string kDegraded = "degraded";

/// n images of which exactly round(n * degraded_fraction) are degraded, in shuffled order.
Ensemble generate_mixed(const Config& cfg, const DegradeConfig& d, double degraded_fraction, std::size_t n,
                        const RngStream& rng, int threads = 1);

/// Copy of cfg at a different image size with cluster counts scaled by the area ratio, so the
/// blob density per pixel is unchanged.
Config rescaled(const Config& cfg, int image_size);

}  // namespace simeval::clb
