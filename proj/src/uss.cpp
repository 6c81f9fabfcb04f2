#include "simeval/uss.hpp"

#include "simeval/error.hpp"
#include "simeval/fft.hpp"
#include "simeval/parallel.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace simeval::uss {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMetersToMm = 1e3;
}  // namespace

void Config::validate() const {
  if (image_size < 2) throw ConfigError("uss: image_size must be >= 2");
  if (!(pixel_pitch > 0.0 && wave_velocity > 0.0 && carrier_frequency > 0.0 && cycles_in_fwhm > 0.0 &&
        f_number_lateral > 0.0 && f_number_elevational > 0.0 && snd > 0.0)) {
    throw ConfigError("uss: all physical parameters must be > 0");
  }
}

double sigma_from_fwhm(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))); }

ResolutionCell resolution_cell(const Config& cfg) {
  cfg.validate();
  ResolutionCell c{};
  c.wavelength = cfg.wave_velocity / cfg.carrier_frequency;
  c.ar = cfg.cycles_in_fwhm * c.wavelength / 2.0;
  c.lr = c.wavelength * cfg.f_number_lateral;
  c.elevational = c.wavelength * cfg.f_number_elevational;
  c.cell_volume = (c.ar * kMetersToMm) * (c.lr * kMetersToMm) * (c.elevational * kMetersToMm);
  c.expected_n = cfg.snd * c.cell_volume;
  return c;
}

Simulator::Simulator(const Config& cfg) : cfg_(cfg), cell_(resolution_cell(cfg)) {
  sigma_x_px_ = sigma_from_fwhm(cell_.ar) / cfg_.pixel_pitch;
  sigma_y_px_ = sigma_from_fwhm(cell_.lr) / cfg_.pixel_pitch;
  wavelength_px_ = cell_.wavelength / cfg_.pixel_pitch;

  const auto n = static_cast<Eigen::Index>(cfg_.image_size);
  transfer_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto dy = static_cast<double>(fft::wrapped_offset(i, n));
    for (Eigen::Index j = 0; j < n; ++j) {
      transfer_(i, j) = psf(static_cast<double>(fft::wrapped_offset(j, n)), dy);
    }
  }
  fft::forward(transfer_);
}

std::complex<double> Simulator::psf(double dx, double dy) const {
  const double envelope =
      std::exp(-0.5 * (dx * dx) / (sigma_x_px_ * sigma_x_px_) - 0.5 * (dy * dy) / (sigma_y_px_ * sigma_y_px_));
  return std::polar(envelope, kTwoPi * dx / wavelength_px_);
}

double Simulator::expected_scatterers() const {
  const double areal_density = cfg_.snd * cell_.elevational * kMetersToMm;  // per mm^2
  const double side_mm = cfg_.image_size * cfg_.pixel_pitch * kMetersToMm;
  return areal_density * side_mm * side_mm;
}

std::vector<Scatterer> Simulator::draw_scatterers(RngStream& rng) const {
  const double mean = expected_scatterers();
  if (!(mean > 0.0)) throw NumericalError("uss: expected scatterer count is 0");
  std::poisson_distribution<long> count_dist(mean);
  const long count = count_dist(rng);
  const double size = static_cast<double>(cfg_.image_size);
  std::vector<Scatterer> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const double x = rng.uniform() * size;
    const double y = rng.uniform() * size;
    const double phase = rng.uniform() * kTwoPi;
    out.push_back({x, y, std::polar(1.0, phase)});
  }
  return out;
}

ComplexGrid Simulator::field(const std::vector<Scatterer>& scatterers) const {
  const auto n = static_cast<Eigen::Index>(cfg_.image_size);
  ComplexGrid grid = ComplexGrid::Zero(n, n);
  for (const auto& s : scatterers) {
    const double col = std::round(s.x);
    const double row = std::round(s.y);
    // Sub-pixel axial offset folded into the carrier phase; the envelope is sampled at the
    // nearest pixel.
    const double residual = s.x - col;
    const auto j = ((static_cast<Eigen::Index>(col) % n) + n) % n;
    const auto i = ((static_cast<Eigen::Index>(row) % n) + n) % n;
    grid(i, j) += s.amplitude * std::polar(1.0, -kTwoPi * residual / wavelength_px_);
  }
  fft::forward(grid);
  grid *= transfer_;
  fft::inverse(grid);
  return grid;
}

Image Simulator::render(const std::vector<Scatterer>& scatterers) const {
  return Image(field(scatterers).abs(), cfg_.pixel_pitch);
}

Ensemble generate_ensemble(const Config& cfg, std::size_t n, const RngStream& rng, int threads) {
  const Simulator sim(cfg);
  std::vector<Image> images(n);
  parallel_for(n, threads, [&](std::size_t i) {
    auto stream = rng.split(i);
    images[i] = sim.generate(stream);
  });
  Manifest m;
  m.generator = "uss";
  m.master_seed = rng.master_seed();
  return Ensemble(std::move(images), std::vector<std::string>(n, kClassA), std::move(m));
}

Ensemble generate_mixed(const Config& cfg_a, const Config& cfg_b, double fraction_b, std::size_t n,
                        const RngStream& rng, int threads) {
  if (cfg_a.image_size != cfg_b.image_size || cfg_a.pixel_pitch != cfg_b.pixel_pitch) {
    throw ConfigError("generate_mixed_uss: configurations must share image geometry");
  }
  if (!(fraction_b >= 0.0 && fraction_b <= 1.0)) throw ConfigError("generate_mixed_uss: fraction must lie in [0, 1]");
  if (n == 0) throw ConfigError("generate_mixed_uss: n must be >= 1");
  const Simulator sim_a(cfg_a), sim_b(cfg_b);
  const auto count_b = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction_b));
  std::vector<std::string> labels(n, kClassA);
  std::fill_n(labels.begin(), count_b, kClassB);
  auto shuffle_stream = rng.split(n);
  std::shuffle(labels.begin(), labels.end(), shuffle_stream);

  std::vector<Image> images(n);
  parallel_for(n, threads, [&](std::size_t i) {
    auto stream = rng.split(i);
    images[i] = (labels[i] == kClassB ? sim_b : sim_a).generate(stream);
  });
  Manifest m;
  m.generator = "uss-mixed";
  m.master_seed = rng.master_seed();
  m.parameters = {{"fraction_b", fraction_b}, {"count_a", n - count_b}, {"count_b", count_b}, {"n", n}};
  return Ensemble(std::move(images), std::move(labels), std::move(m));
}

}  // namespace simeval::uss
