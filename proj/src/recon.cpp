#include "ifp/recon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ifp/error.hpp"
#include "ifp/rng.hpp"
#include "ifp/tpe.hpp"

namespace ifp {

namespace {

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* what) {
  if (!a.same_shape(b)) throw InvalidArgument(std::string(what) + ": dimension mismatch");
}

// base + gain / max(gain)^2 * (updated - target)
ImageGrid weighted_step(const ImageGrid& base, const ImageGrid& gain, const ImageGrid& target,
                        const ImageGrid& updated, bool clamp, const char* what) {
  require_same_shape(base, gain, what);
  require_same_shape(base, target, what);
  require_same_shape(base, updated, what);
  const double peak = gain.max();
  if (!(peak > 0.0)) throw DegenerateInput(std::string(what) + ": normalizer is identically zero");
  const double inv_sq = 1.0 / (peak * peak);
  ImageGrid out = base;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += gain[i] * inv_sq * (updated[i] - target[i]);
    if (clamp) out[i] = std::max(out[i], 0.0);
  }
  return out;
}

double l2_norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

void ReconOptions::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (!(convergence_tolerance >= 0.0)) throw InvalidArgument("convergence_tolerance must be >= 0");
}

ReconState init_state(const std::vector<ImageGrid>& frames, const std::vector<ShiftVector>& shifts) {
  if (frames.empty()) throw InvalidArgument("init_state: no frames");
  if (frames.size() != shifts.size()) {
    throw InvalidArgument("init_state: " + std::to_string(frames.size()) + " frames but " +
                          std::to_string(shifts.size()) + " shifts");
  }
  const ImageGrid& first = frames.front();
  const auto geometry = CanvasGeometry::fit(first.width(), first.height(), shifts);

  ImageGrid visited(geometry.canvas_width, geometry.canvas_height, first.pixel_pitch(), 0.0);
  for (const auto& s : shifts) {
    const ShiftVector o = geometry.window_offset(s);
    for (std::size_t y = 0; y < first.height(); ++y) {
      for (std::size_t x = 0; x < first.width(); ++x) {
        visited(static_cast<std::size_t>(o.dx) + x, static_cast<std::size_t>(o.dy) + y) = 1.0;
      }
    }
  }

  return ReconState{
      mean_image(frames),
      ImageGrid(geometry.canvas_width, geometry.canvas_height, first.pixel_pitch(), 1.0),
      geometry,
      shifts,
      std::move(visited),
      0,
      {},
      false,
  };
}

ImageGrid target_image(const ReconState& state, ShiftVector shift) {
  const ImageGrid window = window_crop(state.pattern_master, state.geometry.window_offset(shift),
                                       state.object.width(), state.object.height());
  ImageGrid out = state.object;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= window[i];
  return out;
}

ImageGrid fourier_update(const ImageGrid& target, const Spectrum& captured_spectrum, const OpticalModel& model) {
  require_same_shape(target, model.otf, "fourier_update");
  if (captured_spectrum.width() != target.width() || captured_spectrum.height() != target.height()) {
    throw InvalidArgument("fourier_update: dimension mismatch");
  }
  Spectrum spec = fft_forward(target);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double h = model.otf[i];
    spec[i] += h * (captured_spectrum[i] - h * spec[i]);
  }
  return fft_inverse(spec, target.pixel_pitch());
}

ImageGrid fourier_update(const ImageGrid& target, const ImageGrid& captured, const OpticalModel& model) {
  require_same_shape(target, captured, "fourier_update");
  return fourier_update(target, fft_forward(captured), model);
}

ImageGrid object_update(const ImageGrid& object, const ImageGrid& pattern_window, const ImageGrid& target,
                        const ImageGrid& updated_target, bool clamp_nonnegative) {
  return weighted_step(object, pattern_window, target, updated_target, clamp_nonnegative, "object_update");
}

ImageGrid pattern_update(const ImageGrid& pattern_window, const ImageGrid& updated_object, const ImageGrid& target,
                         const ImageGrid& updated_target, bool clamp_nonnegative) {
  return weighted_step(pattern_window, updated_object, target, updated_target, clamp_nonnegative, "pattern_update");
}

double ifp_iteration(ReconState& state, const std::vector<ImageGrid>& frames,
                     const std::vector<Spectrum>& frame_spectra, const OpticalModel& model, const ReconOptions& opts) {
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (opts.frame_order == FrameOrder::seeded_random) {
    Rng rng(derive_seed(opts.order_seed, {static_cast<std::uint64_t>(state.iteration)}));
    std::shuffle(order.begin(), order.end(), rng);
  }

  const std::size_t w = state.object.width();
  const std::size_t h = state.object.height();
  double residual = 0.0;
  for (const std::size_t n : order) {
    try {
      const ShiftVector offset = state.geometry.window_offset(state.shifts[n]);
      const ImageGrid window = window_crop(state.pattern_master, offset, w, h);
      ImageGrid target = state.object;
      for (std::size_t i = 0; i < target.size(); ++i) target[i] *= window[i];

      const ImageGrid updated = fourier_update(target, frame_spectra[n], model);
      for (std::size_t i = 0; i < target.size(); ++i) residual += (updated[i] - target[i]) * (updated[i] - target[i]);

      state.object = object_update(state.object, window, target, updated, opts.clamp_nonnegative);
      ImageGrid delta = pattern_update(window, state.object, target, updated, opts.clamp_nonnegative);
      for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= window[i];
      state.pattern_master = window_accumulate(state.pattern_master, offset, delta);
    } catch (const Error&) {
      rethrow_with_context("iteration " + std::to_string(state.iteration) + ", frame " + std::to_string(n));
    }
  }
  ++state.iteration;
  state.residual_history.push_back(residual);
  return residual;
}

ReconState run_ifp(ReconState state, const std::vector<ImageGrid>& frames, const OpticalModel& model,
                   const ReconOptions& opts) {
  opts.validate();
  if (frames.size() != state.shifts.size()) {
    throw InvalidArgument("run_ifp: " + std::to_string(frames.size()) + " frames but " +
                          std::to_string(state.shifts.size()) + " shifts");
  }
  std::vector<Spectrum> spectra;
  spectra.reserve(frames.size());
  for (std::size_t n = 0; n < frames.size(); ++n) {
    if (!frames[n].same_shape(state.object)) {
      throw InvalidArgument("run_ifp: frame " + std::to_string(n) + " does not match the object grid");
    }
    spectra.push_back(fft_forward(frames[n]));
  }
  for (const auto& s : state.shifts) {
    if (!state.geometry.contains(s)) throw OutOfRange("run_ifp: a shift window leaves the pattern canvas");
  }

  state.converged = false;
  for (int k = 0; k < opts.max_iterations; ++k) {
    const ImageGrid previous = state.object;
    ifp_iteration(state, frames, spectra, model, opts);

    double diff = 0.0;
    for (std::size_t i = 0; i < previous.size(); ++i) {
      diff += (state.object[i] - previous[i]) * (state.object[i] - previous[i]);
    }
    const double reference = l2_norm(previous.samples());
    const double change = reference > 0.0 ? std::sqrt(diff) / reference : std::sqrt(diff);
    if (change < opts.convergence_tolerance) {
      state.converged = true;
      break;
    }
  }
  return state;
}

ReconState run_ifp(const std::vector<ImageGrid>& frames, const std::vector<ShiftVector>& shifts,
                   const OpticalModel& model, const ReconOptions& opts) {
  return run_ifp(init_state(frames, shifts), frames, model, opts);
}

}  // namespace ifp
