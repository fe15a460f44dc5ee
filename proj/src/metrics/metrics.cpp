#include "tactile/metrics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tactile/error.hpp"

namespace tactile {

namespace {

Heightfield matched(const Heightfield& a, const Heightfield& b) {
    return resample(b, a.width(), a.height());
}

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const int r = size / 2;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double x = i - r;
        k[static_cast<std::size_t>(i)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Valid-mode separable filter: output is (w - n + 1) x (h - n + 1).
std::vector<double> filter_valid(const std::vector<double>& img, std::size_t w, std::size_t h,
                                 const std::vector<double>& k) {
    const std::size_t n = k.size();
    const std::size_t ow = w - n + 1;
    const std::size_t oh = h - n + 1;
    std::vector<double> rows(ow * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += k[i] * img[y * w + x + i];
            rows[y * ow + x] = s;
        }
    }
    std::vector<double> out(ow * oh);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += k[i] * rows[(y + i) * ow + x];
            out[y * ow + x] = s;
        }
    }
    return out;
}

}  // namespace

double rms_roughness(const Heightfield& field) {
    const auto v = field.values();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(v.size()));
}

double mse(const Heightfield& a, const Heightfield& b) {
    const Heightfield bm = matched(a, b);
    const auto va = a.values();
    const auto vb = bm.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double d = va[i] - vb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(va.size());
}

double ssim(const Heightfield& a, const Heightfield& b, const SsimOptions& options) {
    if (options.window < 1 || options.window % 2 == 0) {
        throw InvalidArgument("SSIM window must be a positive odd size");
    }
    const auto win = static_cast<std::size_t>(options.window);
    if (a.width() < win || a.height() < win) {
        throw InvalidArgument("SSIM needs images of at least " + std::to_string(win) + "x" + std::to_string(win) +
                              " pixels, got " + std::to_string(a.width()) + "x" + std::to_string(a.height()));
    }
    const Heightfield bm = matched(a, b);
    const std::size_t w = a.width();
    const std::size_t h = a.height();
    const auto va = a.values();
    const auto vb = bm.values();
    std::vector<double> x(va.begin(), va.end());
    std::vector<double> y(vb.begin(), vb.end());
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto k = gaussian_kernel(options.window, options.sigma);
    const auto mx = filter_valid(x, w, h, k);
    const auto my = filter_valid(y, w, h, k);
    const auto sxx = filter_valid(xx, w, h, k);
    const auto syy = filter_valid(yy, w, h, k);
    const auto sxy = filter_valid(xy, w, h, k);

    const double c1 = std::pow(options.k1 * options.dynamic_range, 2);
    const double c2 = std::pow(options.k2 * options.dynamic_range, 2);
    double total = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i];
        const double vy = syy[i] - my[i] * my[i];
        const double cov = sxy[i] - mx[i] * my[i];
        const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2);
        const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
        total += num / den;
    }
    return total / static_cast<double>(mx.size());
}

double pearson(const Heightfield& a, const Heightfield& b) {
    const Heightfield bm = matched(a, b);
    const auto va = a.values();
    const auto vb = bm.values();
    const double n = static_cast<double>(va.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        ma += va[i];
        mb += vb[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        sab += (va[i] - ma) * (vb[i] - mb);
        saa += (va[i] - ma) * (va[i] - ma);
        sbb += (vb[i] - mb) * (vb[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

MetricReport compare(const Heightfield& a, const Heightfield& b) {
    MetricReport r;
    r.rms_a = rms_roughness(a);
    r.rms_b = rms_roughness(b);
    r.mse = mse(a, b);
    r.ssim = ssim(a, b);
    r.pearson = pearson(a, b);
    r.width = a.width();
    r.height = a.height();
    return r;
}

}  // namespace tactile
