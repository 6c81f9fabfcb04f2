#pragma once

#include "simeval/image.hpp"

namespace simeval::fft {

/// In-place 2D DFT. The inverse transform is scaled by 1/(rows*cols) so that
/// inverse(forward(x)) == x. Thread-safe.
void forward(ComplexGrid& grid);
void inverse(ComplexGrid& grid);

ComplexGrid forward(const Grid& real);

/// Signed frequency in cycles per sample for DFT bin k of an n-point transform, in [-0.5, 0.5).
inline double frequency(Eigen::Index k, Eigen::Index n) {
  const auto shifted = (k <= (n - 1) / 2) ? k : k - n;
  return static_cast<double>(shifted) / static_cast<double>(n);
}

/// Minimal-image (wrapped) offset of index k on an n-periodic axis.
inline Eigen::Index wrapped_offset(Eigen::Index k, Eigen::Index n) {
  return (k <= n / 2) ? k : k - n;
}

}  // namespace simeval::fft
