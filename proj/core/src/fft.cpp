#include "zklab/fft.hpp"

#include <fftw3.h>

#include <array>
#include <map>
#include <mutex>
#include <vector>

namespace zklab::fft {

namespace {

struct PlanKey {
  std::array<int, 3> dims;
  int rank;
  int sign;
  int nthreads;
  auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
#ifdef ZKLAB_HAVE_FFTW_THREADS
    if (!threads_ready_) {
      fftw_init_threads();
      threads_ready_ = true;
    }
    fftw_plan_with_nthreads(key.nthreads);
#endif
    std::size_t total = 1;
    for (int r = 0; r < key.rank; ++r) total *= static_cast<std::size_t>(key.dims[r]);
    fftw_complex* a = fftw_alloc_complex(total);
    fftw_complex* b = fftw_alloc_complex(total);
    // FFTW wants the slowest dimension first.
    std::array<int, 3> n{};
    for (int r = 0; r < key.rank; ++r) n[r] = key.dims[key.rank - 1 - r];
    fftw_plan p = fftw_plan_dft(key.rank, n.data(), a, b, key.sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    if (p == nullptr) throw ZklabError("fft: plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

  int threads = 1;

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
  bool threads_ready_ = false;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(const PlanKey& key, const cplx* in, cplx* out) {
  fftw_plan p = cache().get(key);
  // The plan is out-of-place; route in-place calls through a scratch copy.
  if (in == out) {
    std::size_t total = 1;
    for (int r = 0; r < key.rank; ++r) total *= static_cast<std::size_t>(key.dims[r]);
    std::vector<cplx> tmp(in, in + total);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()), reinterpret_cast<fftw_complex*>(out));
    return;
  }
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)), reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void set_threads(int n) { cache().threads = n < 1 ? 1 : n; }
int threads() { return cache().threads; }

void forward_2d(int nx, int ny, const cplx* in, cplx* out) {
  run({{nx, ny, 1}, 2, FFTW_FORWARD, cache().threads}, in, out);
}

void backward_2d(int nx, int ny, const cplx* in, cplx* out) {
  run({{nx, ny, 1}, 2, FFTW_BACKWARD, cache().threads}, in, out);
}

void forward_3d(int nx, int ny, int nt, const cplx* in, cplx* out) {
  run({{nx, ny, nt}, 3, FFTW_FORWARD, cache().threads}, in, out);
}

void backward_3d(int nx, int ny, int nt, const cplx* in, cplx* out) {
  run({{nx, ny, nt}, 3, FFTW_BACKWARD, cache().threads}, in, out);
}

}  // namespace zklab::fft
