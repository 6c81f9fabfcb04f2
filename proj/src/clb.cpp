#include "simeval/clb.hpp"

#include "simeval/error.hpp"
#include "simeval/fft.hpp"
#include "simeval/parallel.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace simeval::clb {

void Config::validate() const {
  if (image_size < 2) throw ConfigError("clb: image_size must be >= 2");
  if (layers.empty() || layers.size() > 2) throw ConfigError("clb: layers must contain 1 or 2 entries");
  if (!(support_floor > 0.0 && support_floor < 1.0)) throw ConfigError("clb: support_floor must lie in (0, 1)");
  for (const auto& l : layers) {
    if (!(l.mean_clusters > 0.0 && l.mean_blobs > 0.0 && l.cluster_spread > 0.0 && l.blob_scale_x > 0.0 &&
          l.blob_scale_y > 0.0 && l.amplitude > 0.0)) {
      throw ConfigError("clb: cluster/blob means, spread, blob scales and amplitude must be > 0");
    }
    if (!(l.alpha > 0.0 && l.beta > 0.0)) throw ConfigError("clb: alpha and beta must be > 0");
  }
}

void DegradeConfig::validate() const {
  if (!(blur_sigma >= 0.0)) throw ConfigError("degrade: blur_sigma must be >= 0");
  if (!(lpf_cutoff_fraction > 0.0 && lpf_cutoff_fraction <= 1.0)) {
    throw ConfigError("degrade: lpf_cutoff_fraction must lie in (0, 1]");
  }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_signed(double d, double n) {
  d = std::fmod(d, n);
  if (d >= 0.5 * n) d -= n;
  if (d < -0.5 * n) d += n;
  return d;
}

double wrap_position(double x, double n) {
  x = std::fmod(x, n);
  if (x < 0.0) x += n;
  return x >= n ? 0.0 : x;
}

// Adds one blob centered at (cx, cy) with toroidal wrap-around, over the ellipse where the
// scaled radius is at most `cut`.
void splat_blob(Grid& img, const Layer& layer, double cx, double cy, double angle, double cut) {
  const auto n = img.rows();
  const double size = static_cast<double>(n);
  const double c = std::cos(angle), s = std::sin(angle);
  const double ix2 = 1.0 / (layer.blob_scale_x * layer.blob_scale_x);
  const double iy2 = 1.0 / (layer.blob_scale_y * layer.blob_scale_y);
  // r2 = qa dx^2 + 2 qb dx dy + qc dy^2
  const double qa = c * c * ix2 + s * s * iy2;
  const double qb = c * s * (ix2 - iy2);
  const double qc = s * s * ix2 + c * c * iy2;
  const double cut2 = cut * cut;

  // Adds the blob to pixels j0 .. j0 + dx.size() - 1 (wrapped) of one row.
  Eigen::ArrayXd value;
  auto add_span = [&](Eigen::Index row, Eigen::Index j0, const Eigen::ArrayXd& dx, double dy) {
    const Eigen::ArrayXd r2 = qa * dx.square() + (2.0 * qb * dy) * dx + qc * dy * dy;
    if (layer.beta == 2.0) value = r2;
    else if (layer.beta == 1.0) value = r2.sqrt();
    else if (layer.beta == 0.5) value = r2.sqrt().sqrt();
    else value = r2.pow(0.5 * layer.beta);
    value = (r2 <= cut2).select(layer.amplitude * (-layer.alpha * value).exp(), 0.0);
    Eigen::Index col = ((j0 % n) + n) % n;
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      img(row, col) += value(k);
      if (++col == n) col = 0;
    }
  };

  // Half-extents of the support ellipse along y and x.
  const double ry = std::sqrt(cut2 * qa / (qa * qc - qb * qb));
  const double rx = std::sqrt(cut2 * qc / (qa * qc - qb * qb));
  if (2.0 * std::max(rx, ry) + 1.0 >= size) {
    Eigen::ArrayXd dx(n);
    for (Eigen::Index j = 0; j < n; ++j) dx(j) = wrap_signed(static_cast<double>(j) - cx, size);
    for (Eigen::Index i = 0; i < n; ++i) add_span(i, 0, dx, wrap_signed(static_cast<double>(i) - cy, size));
    return;
  }
  const auto i0 = static_cast<Eigen::Index>(std::floor(cy - ry));
  const auto i1 = static_cast<Eigen::Index>(std::ceil(cy + ry));
  for (Eigen::Index i = i0; i <= i1; ++i) {
    const double dy = static_cast<double>(i) - cy;
    const double disc = qb * qb * dy * dy - qa * (qc * dy * dy - cut2);
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const auto j0 = static_cast<Eigen::Index>(std::floor(cx + (-qb * dy - root) / qa));
    const auto j1 = static_cast<Eigen::Index>(std::ceil(cx + (-qb * dy + root) / qa));
    const Eigen::ArrayXd dx = Eigen::ArrayXd::LinSpaced(j1 - j0 + 1, static_cast<double>(j0) - cx,
                                                        static_cast<double>(j1) - cx);
    add_span(((i % n) + n) % n, j0, dx, dy);
  }
}

}  // namespace

Sample generate_sample(const Config& cfg, RngStream& rng) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.image_size);
  const double size = static_cast<double>(n);
  Sample out;
  Grid img = Grid::Constant(n, n, cfg.dc_offset);

  for (const auto& layer : cfg.layers) {
    const double scaled_cut = std::pow(std::log(1.0 / cfg.support_floor) / layer.alpha, 1.0 / layer.beta);

    std::poisson_distribution<long> cluster_count(layer.mean_clusters);
    std::poisson_distribution<long> blob_count(layer.mean_blobs);
    std::normal_distribution<double> offset(0.0, layer.cluster_spread);

    const long clusters = cluster_count(rng);
    for (long k = 0; k < clusters; ++k) {
      const double cx = rng.uniform() * size;
      const double cy = rng.uniform() * size;
      const double cluster_angle = rng.uniform() * kTwoPi;
      const long blobs = blob_count(rng);
      for (long b = 0; b < blobs; ++b) {
        const double bx = cx + offset(rng);
        const double by = cy + offset(rng);
        const double angle = layer.orientation == Orientation::oriented ? cluster_angle : rng.uniform() * kTwoPi;
        splat_blob(img, layer, wrap_position(bx, size), wrap_position(by, size), angle, scaled_cut);
      }
      out.blobs += static_cast<std::size_t>(blobs);
    }
    out.clusters += static_cast<std::size_t>(clusters);
  }
  out.image = Image(std::move(img));
  return out;
}

Ensemble generate_ensemble(const Config& cfg, std::size_t n, const RngStream& rng, int threads) {
  cfg.validate();
  std::vector<Image> images(n);
  parallel_for(n, threads, [&](std::size_t i) {
    auto stream = rng.split(i);
    images[i] = generate(cfg, stream);
  });
  Manifest m;
  m.generator = "clb";
  m.master_seed = rng.master_seed();
  return Ensemble(std::move(images), std::vector<std::string>(n, kRegular), std::move(m));
}

Image degrade(const Image& img, const DegradeConfig& d) {
  d.validate();
  ComplexGrid spectrum = fft::forward(img.data);
  const auto rows = spectrum.rows(), cols = spectrum.cols();
  const double band = 0.5 * d.lpf_cutoff_fraction;
  const double blur = 2.0 * std::numbers::pi * std::numbers::pi * d.blur_sigma * d.blur_sigma;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double fy = fft::frequency(i, rows);
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double fx = fft::frequency(j, cols);
      if (std::max(std::abs(fx), std::abs(fy)) > band) {
        spectrum(i, j) = 0.0;
      } else {
        spectrum(i, j) *= std::exp(-blur * (fx * fx + fy * fy));
      }
    }
  }
  fft::inverse(spectrum);
  return Image(spectrum.real(), img.pixel_pitch);
}

Ensemble generate_mixed(const Config& cfg, const DegradeConfig& d, double degraded_fraction, std::size_t n,
                        const RngStream& rng, int threads) {
  cfg.validate();
  d.validate();
  if (!(degraded_fraction >= 0.0 && degraded_fraction <= 1.0)) {
    throw ConfigError("generate_mixed: degraded fraction must lie in [0, 1]");
  }
  if (n == 0) throw ConfigError("generate_mixed: n must be >= 1");
  const auto degraded = static_cast<std::size_t>(std::llround(static_cast<double>(n) * degraded_fraction));
  std::vector<std::string> labels(n, kRegular);
  std::fill_n(labels.begin(), degraded, kDegraded);
  auto shuffle_stream = rng.split(n);
  std::shuffle(labels.begin(), labels.end(), shuffle_stream);

  std::vector<Image> images(n);
  parallel_for(n, threads, [&](std::size_t i) {
    auto stream = rng.split(i);
    Image img = generate(cfg, stream);
    images[i] = labels[i] == kDegraded ? degrade(img, d) : std::move(img);
  });
  Manifest m;
  m.generator = "clb-mixed";
  m.master_seed = rng.master_seed();
  m.parameters = {{"degraded_fraction", degraded_fraction}, {"degraded_count", degraded}, {"n", n}};
  return Ensemble(std::move(images), std::move(labels), std::move(m));
}

Config rescaled(const Config& cfg, int image_size) {
  Config out = cfg;
  const double ratio = static_cast<double>(image_size) / static_cast<double>(cfg.image_size);
  out.image_size = image_size;
  for (auto& l : out.layers) l.mean_clusters *= ratio * ratio;
  return out;
}

}  // namespace simeval::clb
