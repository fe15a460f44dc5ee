#pragma once

#include <cstddef>

#include "tactile/heightfield.hpp"

namespace tactile {

// Mean-centered RMS (Rq roughness): sqrt(mean((v - mean v)^2)).
double rms_roughness(const Heightfield& field);

// Mean squared difference. `b` is bilinearly resampled to a's dimensions
// when they differ.
double mse(const Heightfield& a, const Heightfield& b);

struct SsimOptions {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

// Mean local SSIM over every window position lying fully inside the image,
// with a normalized Gaussian window. `b` is resampled to a's dimensions.
// Throws InvalidArgument when the image is smaller than the window.
double ssim(const Heightfield& a, const Heightfield& b, const SsimOptions& options = {});

// Pearson correlation of pixel values (b resampled to a). Zero when either
// field is constant.
double pearson(const Heightfield& a, const Heightfield& b);

struct MetricReport {
    double rms_a = 0.0;
    double rms_b = 0.0;
    double mse = 0.0;
    double ssim = 0.0;
    double pearson = 0.0;
    std::size_t width = 0;
    std::size_t height = 0;
};

MetricReport compare(const Heightfield& a, const Heightfield& b);

}  // namespace tactile
