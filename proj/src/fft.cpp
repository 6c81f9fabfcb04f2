#include "simeval/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace simeval::fft {

namespace {

// Plans are created once per (rows, cols, sign) with FFTW_ESTIMATE, which makes them
// deterministic; fftw_execute_dft on an existing plan is thread-safe.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * rows * cols));
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, scratch, scratch, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(ComplexGrid& grid, int sign) {
  if (grid.size() == 0) return;
  auto plan = cache().get(static_cast<int>(grid.rows()), static_cast<int>(grid.cols()), sign);
  auto* data = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(plan, data, data);
}

}  // namespace

void forward(ComplexGrid& grid) { execute(grid, FFTW_FORWARD); }

void inverse(ComplexGrid& grid) {
  execute(grid, FFTW_BACKWARD);
  grid /= static_cast<double>(grid.size());
}

ComplexGrid forward(const Grid& real) {
  ComplexGrid out = real.cast<std::complex<double>>();
  forward(out);
  return out;
}

}  // namespace simeval::fft
