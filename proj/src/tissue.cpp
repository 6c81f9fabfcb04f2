#include "simeval/tissue.hpp"

#include "simeval/error.hpp"
#include "simeval/fft.hpp"
#include "simeval/parallel.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

namespace simeval::tissue {

void Config::validate() const {
  if (image_size < 8) throw ConfigError("tissue: image_size must be >= 8");
  if (classes.empty()) throw ConfigError("tissue: at least one class is required");
  if (!(disk_fraction > 0.0 && disk_fraction <= 0.78)) throw ConfigError("tissue: disk_fraction must lie in (0, 0.78]");
  if (!(noise_std >= 0.0) || !(texture_sigma > 0.0)) throw ConfigError("tissue: noise_std >= 0 and texture_sigma > 0 required");
  double total = 0.0;
  for (const auto& c : classes) {
    if (!(c.prevalence > 0.0) || !(c.sd_log_ratio >= 0.0)) {
      throw ConfigError("tissue: class prevalence must be > 0 and sd_log_ratio >= 0");
    }
    total += c.prevalence;
  }
  if (!(total > 0.0)) throw ConfigError("tissue: prevalences must sum to > 0");
}

Sample generate_sample(const Config& cfg, RngStream& rng) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.image_size);

  double total = 0.0;
  for (const auto& c : cfg.classes) total += c.prevalence;
  double pick = rng.uniform() * total;
  const TissueClass* cls = &cfg.classes.back();
  for (const auto& c : cfg.classes) {
    if (pick < c.prevalence) {
      cls = &c;
      break;
    }
    pick -= c.prevalence;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const double log_ratio = cls->mean_log_ratio + cls->sd_log_ratio * normal(rng);

  // Smooth random field used to rank disk pixels; the top ones become glandular.
  ComplexGrid field(n, n);
  for (Eigen::Index i = 0; i < field.size(); ++i) field.data()[i] = normal(rng);
  fft::forward(field);
  const double blur = 2.0 * std::numbers::pi * std::numbers::pi * cfg.texture_sigma * cfg.texture_sigma;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fy = fft::frequency(i, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double fx = fft::frequency(j, n);
      field(i, j) *= std::exp(-blur * (fx * fx + fy * fy));
    }
  }
  fft::inverse(field);

  const double center = 0.5 * static_cast<double>(n - 1);
  const double radius = std::sqrt(cfg.disk_fraction * static_cast<double>(n * n) / std::numbers::pi);
  std::vector<Eigen::Index> disk;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dy = static_cast<double>(i) - center, dx = static_cast<double>(j) - center;
      if (dx * dx + dy * dy <= radius * radius) disk.push_back(i * n + j);
    }
  }
  const auto tissue = static_cast<double>(disk.size());
  auto gland = static_cast<std::size_t>(std::llround(tissue / (1.0 + std::exp(log_ratio))));
  gland = std::clamp<std::size_t>(gland, 1, disk.size() - 1);
  std::stable_sort(disk.begin(), disk.end(), [&](Eigen::Index a, Eigen::Index b) {
    return field.data()[a].real() > field.data()[b].real();
  });

  Grid img = Grid::Constant(n, n, cfg.background_value);
  for (std::size_t k = 0; k < disk.size(); ++k) {
    img.data()[disk[k]] = k < gland ? cfg.gland_value : cfg.fat_value;
  }
  if (cfg.noise_std > 0.0) {
    for (Eigen::Index i = 0; i < img.size(); ++i) img.data()[i] += cfg.noise_std * normal(rng);
  }
  return {Image(std::move(img)), cls->name, log_ratio};
}

Ensemble generate_ensemble(const Config& cfg, std::size_t n, const RngStream& rng, int threads) {
  cfg.validate();
  std::vector<Image> images(n);
  std::vector<std::string> labels(n);
  parallel_for(n, threads, [&](std::size_t i) {
    auto stream = rng.split(i);
    auto s = generate_sample(cfg, stream);
    images[i] = std::move(s.image);
    labels[i] = std::move(s.label);
  });
  Manifest m;
  m.generator = "tissue";
  m.master_seed = rng.master_seed();
  return Ensemble(std::move(images), std::move(labels), std::move(m));
}

}  // namespace simeval::tissue
