#include "oslo/render.hpp"

#include <algorithm>
#include <cmath>

namespace oslo {

namespace {

std::uint8_t quantize(double v) noexcept {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void put(Grid<Rgb>& img, int x, int y, const Rgb& c) {
    if (img.contains(x, y)) {
        img(x, y) = c;
    }
}

void line(Grid<Rgb>& img, int x0, int y0, int x1, int y1, const Rgb& c) {
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        put(img, x0, y0, c);
        if (x0 == x1 && y0 == y1) {
            break;
        }
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

Rgb label_color(std::int32_t label) noexcept {
    // Golden-ratio hue walk gives well-separated colors for nearby labels.
    const double h = std::fmod(static_cast<double>(label) * 0.618033988749895, 1.0) * 6.0;
    const double f = h - std::floor(h);
    const double v = 0.95;
    const double p = v * 0.25;
    const double q = v * (1.0 - 0.75 * f);
    const double t = v * (0.25 + 0.75 * f);
    switch (static_cast<int>(h) % 6) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

}  // namespace

Grid<std::uint8_t> to_gray8(const Grid<double>& values) {
    Grid<std::uint8_t> out(values.width(), values.height());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = quantize(values[i]);
    }
    return out;
}

Grid<std::uint8_t> to_gray8(const IntensityImage& img) { return to_gray8(img.grid()); }

Grid<std::uint8_t> to_gray8(const SaliencyMap& map) {
    const double peak = map.normalized() ? 1.0 : map.max_value();
    Grid<std::uint8_t> out(map.width(), map.height());
    for (std::size_t i = 0; i < map.size(); ++i) {
        out[i] = peak > 0.0 ? quantize(map[i] / peak) : 0;
    }
    return out;
}

Grid<std::uint8_t> to_gray8(const BinaryMap& map) {
    Grid<std::uint8_t> out(map.width(), map.height());
    for (std::size_t i = 0; i < map.size(); ++i) {
        out[i] = map[i] ? 255 : 0;
    }
    return out;
}

Grid<Rgb> render_overlay(const IntensityImage& green, const IntensityImage& white,
                         const LabelMap& labels, std::span<const Detection> detections) {
    const int w = labels.width();
    const int h = labels.height();
    if (green.width() != w || green.height() != h || white.width() != w ||
        white.height() != h) {
        throw InvalidArgument("overlay: channel and label sizes differ");
    }
    Grid<Rgb> out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double wv = white(x, y);
            const double gv = green(x, y);
            out(x, y) = {wv, std::min(1.0, gv + wv), wv};
        }
    }
    const Rgb boundary{1.0, 0.0, 1.0};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t l = labels(x, y);
            if (l == 0) {
                continue;
            }
            const bool edge = x == 0 || y == 0 || x == w - 1 || y == h - 1 ||
                              labels(x - 1, y) != l || labels(x + 1, y) != l ||
                              labels(x, y - 1) != l || labels(x, y + 1) != l;
            if (edge) {
                out(x, y) = boundary;
            }
        }
    }
    const Rgb cross{1.0, 1.0, 0.0};
    for (const Detection& d : detections) {
        const int cx = static_cast<int>(std::lround(d.nucleus_centroid.x));
        const int cy = static_cast<int>(std::lround(d.nucleus_centroid.y));
        for (int k = -3; k <= 3; ++k) {
            put(out, cx + k, cy, cross);
            put(out, cx, cy + k, cross);
        }
    }
    return out;
}

Grid<Rgb> colorize_labels(const LabelMap& labels) {
    Grid<Rgb> out(labels.width(), labels.height());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0) {
            out[i] = label_color(labels[i]);
        }
    }
    return out;
}

Grid<Rgb> plot_cost_curves(const MinimaxResult& result, int width, int height) {
    if (width < 64 || height < 64) {
        throw InvalidArgument("cost plot must be at least 64x64");
    }
    Grid<Rgb> out(width, height, Rgb{1.0, 1.0, 1.0});
    const int left = 24;
    const int bottom = height - 24;
    const int right = width - 8;
    const int top = 8;
    const Rgb axis{0.0, 0.0, 0.0};
    line(out, left, bottom, right, bottom, axis);
    line(out, left, bottom, left, top, axis);

    double peak = 0.0;
    for (const CostCurve& c : result.curves) {
        for (const CostSample& s : c.samples) {
            if (std::isfinite(s.cost)) {
                peak = std::max(peak, s.cost);
            }
        }
    }
    if (peak <= 0.0) {
        peak = 1.0;
    }
    auto px = [&](double level) {
        return left + static_cast<int>(std::lround(level * (right - left)));
    };
    auto py = [&](double cost) {
        return bottom - static_cast<int>(std::lround(cost / peak * (bottom - top)));
    };
    auto draw = [&](const CostCurve& c, const Rgb& color) {
        for (std::size_t i = 1; i < c.samples.size(); ++i) {
            const CostSample& a = c.samples[i - 1];
            const CostSample& b = c.samples[i];
            if (std::isfinite(a.cost) && std::isfinite(b.cost)) {
                line(out, px(a.level), py(a.cost), px(b.level), py(b.cost), color);
            }
        }
    };
    for (std::size_t i = 0; i < result.curves.size(); ++i) {
        if (i != result.lambda_index) {
            const double t = result.curves.size() > 1
                                 ? static_cast<double>(i) / static_cast<double>(result.curves.size() - 1)
                                 : 0.0;
            draw(result.curves[i], Rgb{0.75 - 0.3 * t, 0.8, 0.45 + 0.5 * t});
        }
    }
    if (result.lambda_index < result.curves.size()) {
        draw(result.curves[result.lambda_index], Rgb{0.85, 0.0, 0.0});
        const int x = px(result.l_g);
        line(out, x, bottom, x, top, Rgb{0.85, 0.0, 0.0});
    }
    return out;
}

}  // namespace oslo
