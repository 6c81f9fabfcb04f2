#pragma once

#include "simeval/image.hpp"
#include "simeval/rng.hpp"

#include <string>
#include <vector>

namespace simeval::tissue {

/// One composition class; its per-image log(F/G) is drawn from N(mean_log_ratio, sd_log_ratio).
struct TissueClass {
  std::string name;
  double prevalence = 1.0;
  double mean_log_ratio = 0.0;
  double sd_log_ratio = 0.05;
};

/// Synthetic two-tissue slice: a disk of fat with smooth glandular regions, on a background.
/// Values are attenuation-like inputs, not physical constants.
struct Config {
  int image_size = 128;
  double background_value = 0.0;
  double fat_value = 0.2;
  double gland_value = 0.8;
  double noise_std = 0.005;
  double disk_fraction = 0.6;  ///< disk area as a fraction of the image
  double texture_sigma = 4.0;  ///< pixels; smoothness of the glandular pattern
  std::vector<TissueClass> classes{{"default", 1.0, 0.0, 0.05}};

  void validate() const;
};

struct Sample {
  Image image;
  std::string label;
  double target_log_ratio;  ///< the drawn log(F/G) before pixel rounding
};

Sample generate_sample(const Config& cfg, RngStream& rng);

Ensemble generate_ensemble(const Config& cfg, std::size_t n, const RngStream& rng, int threads = 1);

}  // namespace simeval::tissue
