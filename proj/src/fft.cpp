#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace bergman::detail {

namespace {

class PlanCache {
 public:
  fftw_plan get(int n, bool forward) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, forward);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    // Unaligned plans so that std::vector storage can be passed to new-array execute.
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_[key] = plan;
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_inplace(std::vector<Complex>& data, bool forward) {
  if (data.empty()) return;
  if (data.size() > (std::size_t{1} << 26)) throw ResourceError("FFT size too large");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_cache().get(static_cast<int>(data.size()), forward), buf, buf);
}

}  // namespace bergman::detail
