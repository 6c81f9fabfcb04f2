#pragma once

#include "simeval/image.hpp"
#include "simeval/rng.hpp"

#include <complex>
#include <string>
#include <vector>

namespace simeval::uss {

/// B-mode speckle parameters. Image x (columns) is the axial propagation direction,
/// y (rows) the lateral direction. SI units unless stated.
struct Config {
  int image_size = 256;
  double pixel_pitch = 100e-6;          ///< m
  double wave_velocity = 1556.0;        ///< m/s
  double carrier_frequency = 3.5e6;     ///< Hz
  double cycles_in_fwhm = 2.0;          ///< N_c
  double f_number_lateral = 2.0;
  double f_number_elevational = 3.0;
  double snd = 1.0;                     ///< scatterers per mm^3

  void validate() const;
};

struct ResolutionCell {
  double wavelength;  ///< m
  double ar;          ///< axial resolution, m
  double lr;          ///< lateral resolution, m
  double elevational; ///< slice thickness, m
  double cell_volume; ///< mm^3
  double expected_n;  ///< scatterers per resolution cell
};

ResolutionCell resolution_cell(const Config& cfg);

/// FWHM-to-standard-deviation conversion of a Gaussian.
double sigma_from_fwhm(double fwhm);

/// Scatterer in continuous pixel coordinates (x = column, y = row).
struct Scatterer {
  double x;
  double y;
  std::complex<double> amplitude;
};

/// Precomputed PSF transfer function for one configuration. Immutable, shareable across threads.
class Simulator {
 public:
  explicit Simulator(const Config& cfg);

  const Config& config() const { return cfg_; }
  const ResolutionCell& cell() const { return cell_; }

  /// Expected number of scatterers in the whole field.
  double expected_scatterers() const;

  /// Poisson count, uniform positions, unit amplitudes with uniform random phase.
  std::vector<Scatterer> draw_scatterers(RngStream& rng) const;

  /// Circularly convolves the deposited scatterers with the complex PSF.
  ComplexGrid field(const std::vector<Scatterer>& scatterers) const;

  /// Envelope |E| of the rendered field.
  Image render(const std::vector<Scatterer>& scatterers) const;

  Image generate(RngStream& rng) const { return render(draw_scatterers(rng)); }

  /// Complex PSF value at an offset in pixels from the scatterer.
  std::complex<double> psf(double dx, double dy) const;

 private:
  Config cfg_;
  ResolutionCell cell_;
  double sigma_x_px_;
  double sigma_y_px_;
  double wavelength_px_;
  ComplexGrid transfer_;
};

inline Image generate_speckle(const Config& cfg, RngStream& rng) { return Simulator(cfg).generate(rng); }

/// Ensemble of n envelopes; image i uses rng.split(i).
Ensemble generate_ensemble(const Config& cfg, std::size_t n, const RngStream& rng, int threads = 1);

inline const std::string kClassA = "A";
inline const std::string kClassB = "B";

/// Exactly round(n * fraction_b) images from cfg_b, the rest from cfg_a, shuffled.
Ensemble generate_mixed(const Config& cfg_a, const Config& cfg_b, double fraction_b, std::size_t n,
                        const RngStream& rng, int threads = 1);

}  // namespace simeval::uss
