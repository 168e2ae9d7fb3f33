// 2D DFTs backed by FFTW. Plans are created once per (size, direction) with
// FFTW_ESTIMATE and executed on fftw_malloc'd scratch buffers, so every call
// sees the same alignment and therefore the same codelets.

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "ifp/error.hpp"
#include "ifp/grid.hpp"

namespace ifp {

namespace {

static_assert(sizeof(fftw_complex) == sizeof(std::complex<double>));

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t width, std::size_t height, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(width, height, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    FftwBuffer in(width * height);
    FftwBuffer out(width * height);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), in.data, out.data, sign,
                                      FFTW_ESTIMATE);
    if (plan == nullptr) throw Error("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

std::vector<std::complex<double>> transform(std::span<const std::complex<double>> input, std::size_t width,
                                            std::size_t height, int sign) {
  const std::size_t n = width * height;
  fftw_plan plan = plan_cache().get(width, height, sign);
  FftwBuffer in(n);
  FftwBuffer out(n);
  std::memcpy(in.data, input.data(), n * sizeof(fftw_complex));
  fftw_execute_dft(plan, in.data, out.data);
  std::vector<std::complex<double>> result(n);
  std::memcpy(static_cast<void*>(result.data()), out.data, n * sizeof(fftw_complex));
  return result;
}

}  // namespace

Spectrum fft_forward(const ImageGrid& img) {
  if (!img.all_finite()) throw InvalidArgument("fft_forward: input contains non-finite samples");
  std::vector<std::complex<double>> field(img.samples().begin(), img.samples().end());
  return Spectrum(img.width(), img.height(), transform(field, img.width(), img.height(), FFTW_FORWARD));
}

Spectrum fft_forward(const Spectrum& field) {
  if (!field.all_finite()) throw InvalidArgument("fft_forward: input contains non-finite samples");
  return Spectrum(field.width(), field.height(),
                  transform(field.samples(), field.width(), field.height(), FFTW_FORWARD));
}

Spectrum fft_inverse_complex(const Spectrum& spec) {
  if (!spec.all_finite()) throw InvalidArgument("fft_inverse: input contains non-finite samples");
  auto out = transform(spec.samples(), spec.width(), spec.height(), FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return Spectrum(spec.width(), spec.height(), std::move(out));
}

ImageGrid fft_inverse(const Spectrum& spec, double pixel_pitch_um) {
  const Spectrum field = fft_inverse_complex(spec);
  std::vector<double> real(field.size());
  for (std::size_t i = 0; i < real.size(); ++i) real[i] = field[i].real();
  return ImageGrid(spec.width(), spec.height(), pixel_pitch_um, std::move(real));
}

}  // namespace ifp
