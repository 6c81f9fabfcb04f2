#include "simeval/stats.hpp"

#include "simeval/core.hpp"
#include "simeval/error.hpp"
#include "simeval/fft.hpp"
#include "simeval/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace simeval::stats {

Moments moments(std::span<const double> values) {
  if (values.empty()) throw DataError("moments of an empty sample");
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double mean = sum.value() / static_cast<double>(values.size());
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  return {mean, sq.value() / static_cast<double>(values.size())};
}

std::size_t shared_bin_count(std::span<const double> pooled) {
  constexpr std::size_t kMinBins = 32, kMaxBins = 4096;
  if (pooled.size() < 4) return kMinBins;
  const auto [lo_it, hi_it] = std::minmax_element(pooled.begin(), pooled.end());
  const double range = *hi_it - *lo_it;
  const double iqr = nearest_rank_quantile(pooled, 0.75) - nearest_rank_quantile(pooled, 0.25);
  if (!(iqr > 0.0) || !(range > 0.0)) return kMinBins;
  const double h = 2.0 * iqr * std::cbrt(1.0 / static_cast<double>(pooled.size()));
  const auto fd = static_cast<std::size_t>(std::ceil(range / h));
  return std::clamp(fd, kMinBins, kMaxBins);
}

// --- speckle ---------------------------------------------------------------------------------

std::optional<double> n_hat_from_snr2(double snr2) {
  if (!(snr2 < 1.0)) return std::nullopt;
  return snr2 / (1.0 - snr2);
}

SpeckleStats snr_stats(const Image& img, PixelKind kind) {
  if (img.size() == 0) throw DataError("snr_stats: empty image");
  std::vector<double> intensity(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = img.data.data()[i];
    intensity[static_cast<std::size_t>(i)] = kind == PixelKind::envelope ? v * v : v;
  }
  const auto m = moments(intensity);
  if (!(m.variance > 0.0)) throw NumericalError("snr_stats: constant image (sigma_I = 0)");
  const double sigma = std::sqrt(m.variance);
  const double snr2 = (m.mean * m.mean) / m.variance;
  return {m.mean, sigma, snr2, n_hat_from_snr2(snr2)};
}

// --- histograms ------------------------------------------------------------------------------

Pdf1D histogram_density(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram: bin count must be >= 1");
  if (!(hi > lo)) throw ConfigError("histogram: empty range");
  Pdf1D pdf;
  pdf.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) pdf.bin_edges[i] = lo + width * static_cast<double>(i);
  pdf.bin_edges.back() = hi;
  std::vector<std::size_t> counts(bins, 0);
  std::size_t total = 0;
  for (double v : samples) {
    if (v < lo || v > hi) continue;
    auto k = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(k, bins - 1)]++;
    ++total;
  }
  pdf.densities.resize(bins, 0.0);
  if (total == 0) return pdf;
  for (std::size_t i = 0; i < bins; ++i) {
    pdf.densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(total) * width);
  }
  return pdf;
}

Pdf1D gray_level_pdf(const Ensemble& e, std::size_t bins, double lo, double hi) {
  if (e.empty()) throw DataError("gray_level_pdf: empty ensemble");
  std::vector<double> pooled;
  for (const auto& img : e.images()) pooled.insert(pooled.end(), img.data.data(), img.data.data() + img.size());
  return histogram_density(pooled, lo, hi, bins);
}

Pdf1D gray_level_pdf(const Ensemble& e, std::size_t bins) {
  if (e.empty()) throw DataError("gray_level_pdf: empty ensemble");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& img : e.images()) {
    lo = std::min(lo, img.data.minCoeff());
    hi = std::max(hi, img.data.maxCoeff());
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return gray_level_pdf(e, bins, lo, hi);
}

std::vector<double> find_peaks(const Pdf1D& pdf, double min_height_fraction, double max_valley_fraction) {
  const auto& d = pdf.densities;
  const std::size_t n = d.size();
  if (n == 0) return {};
  const double top = *std::max_element(d.begin(), d.end());
  if (!(top > 0.0)) return {};

  // Candidate maxima; a plateau counts once, at its middle.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && d[j + 1] == d[i]) ++j;
    const bool left_ok = i == 0 || d[i - 1] < d[i];
    const bool right_ok = j + 1 == n || d[j + 1] < d[i];
    if (left_ok && right_ok && d[i] >= min_height_fraction * top) candidates.push_back((i + j) / 2);
    i = j + 1;
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return d[a] != d[b] ? d[a] > d[b] : a < b;
  });

  std::vector<std::size_t> kept;
  for (auto c : candidates) {
    bool distinct = true;
    for (auto k : kept) {
      const auto [lo, hi] = std::minmax(c, k);
      const double valley = *std::min_element(d.begin() + static_cast<std::ptrdiff_t>(lo),
                                              d.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
      if (valley >= max_valley_fraction * d[c]) {
        distinct = false;
        break;
      }
    }
    if (distinct) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<double> centers;
  for (auto k : kept) centers.push_back(pdf.center(k));
  return centers;
}

// --- autocorrelation -------------------------------------------------------------------------

Grid papoulis_window(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 2 || cols < 2) throw ConfigError("papoulis_window: side length must be >= 2");
  auto axis = [](Eigen::Index n) {
    Eigen::ArrayXd w(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      w(k) = papoulis(-1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    return w;
  };
  const Eigen::ArrayXd wy = axis(rows), wx = axis(cols);
  Grid out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) out.row(i) = wy(i) * wx.transpose();
  return out;
}

Grid papoulis_window(Eigen::Index n) { return papoulis_window(n, n); }

namespace {

// Linear autocorrelation via a (2*rows) x (2*cols) zero-padded FFT, returned centered.
Grid linear_autocorrelation(const Grid& x) {
  const auto rows = x.rows(), cols = x.cols();
  ComplexGrid padded = ComplexGrid::Zero(2 * rows, 2 * cols);
  padded.topLeftCorner(rows, cols) = x.cast<std::complex<double>>();
  fft::forward(padded);
  padded = padded.abs2().cast<std::complex<double>>();
  fft::inverse(padded);
  Grid out(2 * rows - 1, 2 * cols - 1);
  for (Eigen::Index dy = -(rows - 1); dy <= rows - 1; ++dy) {
    const auto src_row = (dy + 2 * rows) % (2 * rows);
    for (Eigen::Index dx = -(cols - 1); dx <= cols - 1; ++dx) {
      const auto src_col = (dx + 2 * cols) % (2 * cols);
      out(dy + rows - 1, dx + cols - 1) = padded(src_row, src_col).real();
    }
  }
  return out;
}

struct WindowCache {
  Grid window;
  Grid correction;  // clamped window autocorrelation
};

WindowCache make_window(Eigen::Index rows, Eigen::Index cols) {
  WindowCache wc;
  wc.window = papoulis_window(rows, cols);
  Grid wa = linear_autocorrelation(wc.window);
  const double floor = 1e-3 * wa(rows - 1, cols - 1);
  wc.correction = wa.max(floor);
  return wc;
}

Grid corrected_autocorrelation(const Image& img, const WindowCache& wc) {
  const double wsum = wc.window.sum();
  const double mean = (wc.window * img.data).sum() / wsum;
  const Grid y = (img.data - mean) * wc.window;
  return linear_autocorrelation(y) / wc.correction;
}

}  // namespace

Grid windowed_autocorrelation(const Image& img) {
  return corrected_autocorrelation(img, make_window(img.height(), img.width()));
}

Grid autocorrelation_2d(const Ensemble& e, int threads) {
  if (e.empty()) throw DataError("autocorrelation: empty ensemble");
  const auto wc = make_window(e.height(), e.width());
  Grid total = Grid::Zero(2 * e.height() - 1, 2 * e.width() - 1);
  constexpr std::size_t kChunk = 16;
  std::vector<Grid> partial(kChunk);
  for (std::size_t start = 0; start < e.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, e.size() - start);
    parallel_for(count, threads, [&](std::size_t k) { partial[k] = corrected_autocorrelation(e[start + k], wc); });
    for (std::size_t k = 0; k < count; ++k) total += partial[k];
  }
  const double peak = total(e.height() - 1, e.width() - 1);
  if (!(peak > 0.0)) throw NumericalError("autocorrelation: zero-variance ensemble");
  return total / peak;
}

RadialProfile radial_profile(const Grid& lag_grid) {
  const auto rows = (lag_grid.rows() + 1) / 2, cols = (lag_grid.cols() + 1) / 2;
  const auto rmax = std::min(rows, cols) / 2;
  std::vector<double> sum(static_cast<std::size_t>(rmax + 1), 0.0);
  std::vector<std::size_t> count(sum.size(), 0);
  for (Eigen::Index dy = -rmax; dy <= rmax; ++dy) {
    for (Eigen::Index dx = -rmax; dx <= rmax; ++dx) {
      const auto r = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(dx * dx + dy * dy))));
      if (r > rmax) continue;
      sum[static_cast<std::size_t>(r)] += lag_grid(rows - 1 + dy, cols - 1 + dx);
      count[static_cast<std::size_t>(r)]++;
    }
  }
  RadialProfile p;
  for (std::size_t r = 0; r < sum.size(); ++r) {
    p.radii.push_back(static_cast<double>(r));
    p.values.push_back(sum[r] / static_cast<double>(count[r]));
  }
  return p;
}

RadialProfile autocorrelation_radial(const Ensemble& e, int threads) {
  return radial_profile(autocorrelation_2d(e, threads));
}

namespace {

double bilinear(const Grid& g, double row, double col) {
  const auto r0 = static_cast<Eigen::Index>(std::floor(row));
  const auto c0 = static_cast<Eigen::Index>(std::floor(col));
  const double fr = row - static_cast<double>(r0), fc = col - static_cast<double>(c0);
  auto at = [&](Eigen::Index r, Eigen::Index c) {
    r = std::clamp<Eigen::Index>(r, 0, g.rows() - 1);
    c = std::clamp<Eigen::Index>(c, 0, g.cols() - 1);
    return g(r, c);
  };
  return (1 - fr) * ((1 - fc) * at(r0, c0) + fc * at(r0, c0 + 1)) + fr * ((1 - fc) * at(r0 + 1, c0) + fc * at(r0 + 1, c0 + 1));
}

}  // namespace

double correlation_length(const Grid& lag_grid, double angle, double level) {
  const double cr = static_cast<double>((lag_grid.rows() - 1) / 2);
  const double cc = static_cast<double>((lag_grid.cols() - 1) / 2);
  const double peak = lag_grid(static_cast<Eigen::Index>(cr), static_cast<Eigen::Index>(cc));
  const double dx = std::cos(angle), dy = std::sin(angle);
  const double max_lag = std::min(cr, cc) / 2.0;
  constexpr double kStep = 0.05;
  double prev = peak;
  for (double t = kStep; t <= max_lag; t += kStep) {
    const double v = bilinear(lag_grid, cr + t * dy, cc + t * dx);
    if (v < level * peak) {
      return t - kStep + kStep * (prev - level * peak) / (prev - v);
    }
    prev = v;
  }
  return max_lag;
}

double autocorrelation_anisotropy(const Image& img, double level) {
  Grid a = windowed_autocorrelation(img);
  const auto cr = (a.rows() - 1) / 2, cc = (a.cols() - 1) / 2;
  const double peak = a(cr, cc);
  if (!(peak > 0.0)) throw NumericalError("anisotropy: constant image");
  a /= peak;
  // Flood fill of the central lobe above `level`.
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(a.rows(), a.cols(), false);
  std::queue<std::pair<Eigen::Index, Eigen::Index>> todo;
  todo.emplace(cr, cc);
  seen(cr, cc) = true;
  double sxx = 0, syy = 0, sxy = 0;
  while (!todo.empty()) {
    const auto [r, c] = todo.front();
    todo.pop();
    const double w = a(r, c);
    const auto dy = static_cast<double>(r - cr), dx = static_cast<double>(c - cc);
    sxx += w * dx * dx;
    syy += w * dy * dy;
    sxy += w * dx * dy;
    constexpr int kDr[] = {1, -1, 0, 0}, kDc[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const auto nr = r + kDr[k], nc = c + kDc[k];
      if (nr < 0 || nc < 0 || nr >= a.rows() || nc >= a.cols() || seen(nr, nc)) continue;
      if (a(nr, nc) > level) {
        seen(nr, nc) = true;
        todo.emplace(nr, nc);
      }
    }
  }
  Eigen::Matrix2d m;
  m << sxx, sxy, sxy, syy;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(m);
  const double lo = solver.eigenvalues()(0), hi = solver.eigenvalues()(1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

// --- Gaussian fit ----------------------------------------------------------------------------

GaussianFit gaussian_fit(std::span<const double> samples) {
  if (samples.size() < 2) throw DataError("gaussian_fit: need at least 2 samples");
  const auto m = moments(samples);
  if (!(m.variance > 0.0)) throw NumericalError("gaussian_fit: zero variance");
  const double sigma = std::sqrt(m.variance);
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const auto bins = shared_bin_count(samples);
  const auto pdf = histogram_density(samples, *lo_it, *hi_it, bins);
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  CompensatedSum err;
  for (std::size_t i = 0; i < pdf.bins(); ++i) {
    const double z = (pdf.center(i) - m.mean) / sigma;
    const double diff = pdf.densities[i] - norm * std::exp(-0.5 * z * z);
    err.add(diff * diff);
  }
  return {m.mean, sigma, err.value() / static_cast<double>(pdf.bins()), bins};
}

// --- F:G -------------------------------------------------------------------------------------

FgRatio fg_ratio(const Image& img, double fat_value, double gland_value, double tolerance) {
  if (!(tolerance >= 0.0) || !(std::abs(fat_value - gland_value) > 2.0 * tolerance)) {
    throw ConfigError("fg_ratio: fat and glandular tolerance bands overlap");
  }
  if (img.size() == 0) throw DataError("fg_ratio: empty image");
  std::size_t fat = 0, gland = 0;
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = img.data.data()[i];
    if (std::abs(v - fat_value) <= tolerance) ++fat;
    else if (std::abs(v - gland_value) <= tolerance) ++gland;
  }
  const double total = static_cast<double>(img.size());
  FgRatio out{static_cast<double>(fat) / total, static_cast<double>(gland) / total, std::nullopt};
  if (fat > 0 && gland > 0) out.log_ratio = std::log(static_cast<double>(fat) / static_cast<double>(gland));
  return out;
}

}  // namespace simeval::stats
