#pragma once

#include "simeval/image.hpp"
#include "simeval/rng.hpp"

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace simeval {

/// Nearest-rank quantile: the ceil(p*n)-th smallest value (1-based), p in (0, 1].
double nearest_rank_quantile(std::span<const double> values, double p);

/// Threshold used by quantize_ensemble: the (1 - top_fraction) nearest-rank quantile of all
/// pixels pooled over the ensemble.
double quantization_threshold(const Ensemble& e, double top_fraction);

/// Maps every pixel to round(255 * clip(v, 0, T) / T) with T from quantization_threshold.
/// The result holds integer values in [0, 255] stored as doubles.
/// Throws DataError for an empty ensemble and NumericalError ("degenerate scale") when T <= 0.
Ensemble quantize_ensemble(const Ensemble& e, double top_fraction = 0.01);

/// Index form of split_halves: two sorted, disjoint index lists covering 0 .. n-1.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, std::uint64_t seed);

/// Disjoint random partition into halves of size floor(n/2) and ceil(n/2) (which half gets the
/// extra image is itself random). Relative image order is preserved inside each half.
std::pair<Ensemble, Ensemble> split_halves(const Ensemble& e, std::uint64_t seed);

enum class StorageFormat {
  automatic,  ///< 8-bit PGM when the manifest says quantized, raw float64 otherwise
  gray8,      ///< binary PGM (P5), values must be integers in [0, 255]
  raw_f64,    ///< little-endian IEEE-754 doubles, row-major, no header
};

/// Writes manifest.json plus one zero-padded file per image into `dir` (created if missing).
void save_ensemble(const Ensemble& e, const std::filesystem::path& dir,
                   StorageFormat format = StorageFormat::automatic);

/// Reads a directory written by save_ensemble. Throws DataError on a missing manifest, a
/// file count that differs from the manifest, or image dimensions that disagree with it.
Ensemble load_ensemble(const std::filesystem::path& dir);

}  // namespace simeval
