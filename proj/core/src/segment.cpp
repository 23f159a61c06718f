#include "oslo/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "oslo/error.hpp"

namespace oslo {

BinaryMap candidate_map(const BinaryMap& b_w, const BinaryMap& b_g) {
    return binary_or(b_w, b_g);
}

double ratio_upper_bound(std::span<const double> r_wi_values) {
    if (r_wi_values.empty()) {
        throw PipelineError("ratio bound undefined: no intersecting regions");
    }
    const auto m = static_cast<double>(r_wi_values.size());
    double sum = 0.0;
    for (double v : r_wi_values) {
        sum += v;
    }
    const double rough = sum / m;
    // Refining the mean by its mean residual makes equal inputs return exactly their value.
    double residual = 0.0;
    for (double v : r_wi_values) {
        residual += v - rough;
    }
    const double mean = rough + residual / m;
    double ss = 0.0;
    for (double v : r_wi_values) {
        ss += (v - mean) * (v - mean);
    }
    return mean + 3.0 * std::sqrt(ss / m);
}

std::vector<Detection> count_and_mark(const RegionPairing& pairing, double bound,
                                      const RegionSet& white_set, const RegionSet& green_set) {
    struct Candidate {
        std::int32_t nucleus = 0;
        std::int32_t body = 0;
        double r_wi = 0.0;
    };
    std::vector<Candidate> accepted;
    std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> seen;
    for (const PairEntry& e : pairing.entries) {
        if (!(e.r_wi <= bound)) {
            continue;
        }
        if (seen.emplace(std::make_pair(e.nucleus_label, e.body_label), accepted.size()).second) {
            accepted.push_back({e.nucleus_label, e.body_label, e.r_wi});
        }
    }
    if (accepted.empty()) {
        return {};
    }

    const LabelMap& wl = white_set.label_map;
    const int width = wl.width();

    // Claim counts: how many accepted unions cover each pixel, and how many
    // accepted detections own it as a nucleus pixel.
    std::vector<std::uint16_t> union_claims(wl.size(), 0);
    std::vector<std::uint16_t> nucleus_claims(wl.size(), 0);
    std::map<std::int32_t, int> nucleus_uses;
    std::map<std::int32_t, int> body_uses;
    for (const Candidate& c : accepted) {
        ++nucleus_uses[c.nucleus];
        ++body_uses[c.body];
    }
    for (const auto& [label, uses] : nucleus_uses) {
        for (std::uint32_t p : white_set.by_label(label).pixels) {
            nucleus_claims[p] = static_cast<std::uint16_t>(nucleus_claims[p] + uses);
            union_claims[p] = static_cast<std::uint16_t>(union_claims[p] + uses);
        }
    }
    for (const auto& [label, uses] : body_uses) {
        for (std::uint32_t p : green_set.by_label(label).pixels) {
            union_claims[p] = static_cast<std::uint16_t>(union_claims[p] + uses);
        }
    }

    std::vector<Detection> detections;
    for (const Candidate& c : accepted) {
        const Region& nucleus = white_set.by_label(c.nucleus);
        const Region& body = green_set.by_label(c.body);
        std::vector<std::uint32_t> pixels;
        pixels.reserve(nucleus.area + body.area);
        std::set_union(nucleus.pixels.begin(), nucleus.pixels.end(), body.pixels.begin(),
                       body.pixels.end(), std::back_inserter(pixels));
        std::erase_if(pixels, [&](std::uint32_t p) {
            if (wl[p] == c.nucleus) {
                return nucleus_claims[p] != 1;
            }
            return union_claims[p] != 1 || nucleus_claims[p] != 0;
        });
        if (pixels.empty()) {
            continue;
        }
        Detection d;
        d.id = static_cast<std::int32_t>(detections.size() + 1);
        d.nucleus_label = c.nucleus;
        d.body_label = c.body;
        d.nucleus_centroid = nucleus.centroid;
        d.r_wi = c.r_wi;
        d.marker_region.label = d.id;
        d.marker_region.area = pixels.size();
        double sx = 0.0;
        double sy = 0.0;
        for (std::uint32_t p : pixels) {
            sx += static_cast<double>(p % static_cast<std::uint32_t>(width));
            sy += static_cast<double>(p / static_cast<std::uint32_t>(width));
        }
        d.marker_region.centroid = {sx / static_cast<double>(pixels.size()),
                                    sy / static_cast<double>(pixels.size())};
        d.marker_region.pixels = std::move(pixels);
        detections.push_back(std::move(d));
    }
    return detections;
}

RegionSet markers_from_detections(const std::vector<Detection>& detections, int width, int height) {
    RegionSet set;
    set.label_map = LabelMap(width, height, 0);
    for (const Detection& d : detections) {
        Region r = d.marker_region;
        r.label = static_cast<std::int32_t>(set.regions.size() + 1);
        for (std::uint32_t p : r.pixels) {
            set.label_map[p] = r.label;
        }
        set.regions.push_back(std::move(r));
    }
    return set;
}

namespace {

// 1D squared distance transform of f (lower envelope of parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    constexpr double kInf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        if (f[static_cast<std::size_t>(q)] == kInf) {
            continue;
        }
        if (f[static_cast<std::size_t>(v[0])] == kInf) {
            v[0] = q;
            continue;
        }
        double s = 0.0;
        while (true) {
            const int p = v[static_cast<std::size_t>(k)];
            s = ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
                 (f[static_cast<std::size_t>(p)] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        if (s <= z[static_cast<std::size_t>(k)]) {
            // k == 0 and the new parabola dominates everywhere.
            v[0] = q;
            z[1] = kInf;
            continue;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = kInf;
    }
    if (f[static_cast<std::size_t>(v[0])] == kInf) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k) + 1] < q) {
            ++k;
        }
        const int p = v[static_cast<std::size_t>(k)];
        d[static_cast<std::size_t>(q)] =
            static_cast<double>(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
    }
}

}  // namespace

Grid<double> squared_distance_transform(const BinaryMap& foreground) {
    const int w = foreground.width();
    const int h = foreground.height();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    Grid<double> out(w, h, 0.0);
    if (foreground.empty()) {
        return out;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = foreground[i] != 0 ? kInf : 0.0;
    }
    const int n = std::max(w, h);
    std::vector<double> f;
    std::vector<double> d;
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);

    f.resize(static_cast<std::size_t>(h));
    d.resize(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            f[static_cast<std::size_t>(y)] = out(x, y);
        }
        edt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) {
            out(x, y) = d[static_cast<std::size_t>(y)];
        }
    }
    f.resize(static_cast<std::size_t>(w));
    d.resize(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            f[static_cast<std::size_t>(x)] = out(x, y);
        }
        edt_1d(f, d, v, z);
        for (int x = 0; x < w; ++x) {
            out(x, y) = d[static_cast<std::size_t>(x)];
        }
    }
    const double cap = static_cast<double>(w) * w + static_cast<double>(h) * h;
    for (double& value : out.values()) {
        if (value == kInf) {
            value = cap;
        }
    }
    return out;
}

LabelMap watershed(const Grid<double>& surface, const RegionSet& markers, const BinaryMap& mask) {
    if (!surface.same_shape(mask) || !surface.same_shape(markers.label_map)) {
        throw InvalidArgument("watershed: dimension mismatch");
    }
    if (markers.regions.empty()) {
        throw InvalidArgument("watershed: no markers");
    }
    const int w = mask.width();
    LabelMap labels(mask.width(), mask.height(), 0);

    struct Item {
        double value;
        std::uint64_t seq;
        std::uint32_t pixel;
        bool operator>(const Item& o) const noexcept {
            return value != o.value ? value > o.value : seq > o.seq;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    std::vector<std::uint8_t> queued(mask.size(), 0);
    std::uint64_t seq = 0;

    for (const Region& r : markers.regions) {
        for (std::uint32_t p : r.pixels) {
            if (mask[p] == 0) {
                throw InvalidArgument("watershed: marker pixel outside mask");
            }
            labels[p] = r.label;
            queued[p] = 1;
        }
    }

    auto expand = [&](std::uint32_t p) {
        const int x = static_cast<int>(p % static_cast<std::uint32_t>(w));
        const int y = static_cast<int>(p / static_cast<std::uint32_t>(w));
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if ((dx == 0 && dy == 0) || !mask.contains(nx, ny)) {
                    continue;
                }
                const auto q = static_cast<std::uint32_t>(mask.index(nx, ny));
                if (mask[q] == 0 || queued[q] != 0) {
                    continue;
                }
                queued[q] = 1;
                labels[q] = labels[p];
                queue.push({surface[q], seq++, q});
            }
        }
    };

    for (const Region& r : markers.regions) {
        for (std::uint32_t p : r.pixels) {
            expand(p);
        }
    }
    while (!queue.empty()) {
        const Item item = queue.top();
        queue.pop();
        expand(item.pixel);
    }
    return labels;
}

}  // namespace oslo
