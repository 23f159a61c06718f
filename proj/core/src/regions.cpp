#include "oslo/regions.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <unordered_map>

namespace oslo {

namespace {

Region make_region(std::int32_t label, std::vector<std::uint32_t> pixels, int width) {
    std::sort(pixels.begin(), pixels.end());
    double sx = 0.0;
    double sy = 0.0;
    const auto w = static_cast<std::uint32_t>(width);
    for (std::uint32_t p : pixels) {
        sx += static_cast<double>(p % w);
        sy += static_cast<double>(p / w);
    }
    Region r;
    r.label = label;
    r.area = pixels.size();
    r.centroid = {sx / static_cast<double>(r.area), sy / static_cast<double>(r.area)};
    r.pixels = std::move(pixels);
    return r;
}

}  // namespace

BinaryMap RegionSet::mask() const {
    BinaryMap out(label_map.width(), label_map.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = label_map[i] != 0 ? 1 : 0;
    }
    return out;
}

RegionSet label_components(const BinaryMap& map, Connectivity connectivity) {
    const int w = map.width();
    const int h = map.height();
    RegionSet set;
    set.label_map = LabelMap(w, h, 0);
    const bool eight = connectivity == Connectivity::Eight;

    std::vector<std::uint32_t> stack;
    for (std::size_t start = 0; start < map.size(); ++start) {
        if (map[start] == 0 || set.label_map[start] != 0) {
            continue;
        }
        const auto label = static_cast<std::int32_t>(set.regions.size() + 1);
        std::vector<std::uint32_t> pixels;
        stack.assign(1, static_cast<std::uint32_t>(start));
        set.label_map[start] = label;
        while (!stack.empty()) {
            const std::uint32_t p = stack.back();
            stack.pop_back();
            pixels.push_back(p);
            const int x = static_cast<int>(p % static_cast<std::uint32_t>(w));
            const int y = static_cast<int>(p / static_cast<std::uint32_t>(w));
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) {
                        continue;
                    }
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (!map.contains(nx, ny)) {
                        continue;
                    }
                    const std::size_t j = map.index(nx, ny);
                    if (map[j] != 0 && set.label_map[j] == 0) {
                        set.label_map[j] = label;
                        stack.push_back(static_cast<std::uint32_t>(j));
                    }
                }
            }
        }
        set.regions.push_back(make_region(label, std::move(pixels), w));
    }
    return set;
}

RegionSet regions_from_labels(const LabelMap& labels) {
    RegionSet set;
    set.label_map = LabelMap(labels.width(), labels.height(), 0);
    std::unordered_map<std::int32_t, std::size_t> slot;
    std::vector<std::vector<std::uint32_t>> pixels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::int32_t l = labels[i];
        if (l == 0) {
            continue;
        }
        auto [it, inserted] = slot.try_emplace(l, pixels.size());
        if (inserted) {
            pixels.emplace_back();
        }
        pixels[it->second].push_back(static_cast<std::uint32_t>(i));
        set.label_map[i] = static_cast<std::int32_t>(it->second + 1);
    }
    for (std::size_t k = 0; k < pixels.size(); ++k) {
        set.regions.push_back(
            make_region(static_cast<std::int32_t>(k + 1), std::move(pixels[k]), labels.width()));
    }
    return set;
}

RegionSet filter_small(const RegionSet& set, std::size_t min_area) {
    RegionSet out;
    out.label_map = LabelMap(set.label_map.width(), set.label_map.height(), 0);
    for (const Region& r : set.regions) {
        if (r.area < min_area) {
            continue;
        }
        Region kept = r;
        kept.label = static_cast<std::int32_t>(out.regions.size() + 1);
        for (std::uint32_t p : kept.pixels) {
            out.label_map[p] = kept.label;
        }
        out.regions.push_back(std::move(kept));
    }
    return out;
}

std::vector<double> RegionPairing::r_wi_values() const {
    std::vector<double> v;
    v.reserve(entries.size());
    for (const auto& e : entries) {
        v.push_back(e.r_wi);
    }
    return v;
}

std::vector<double> RegionPairing::r_gw_values() const {
    std::vector<double> v;
    v.reserve(entries.size());
    for (const auto& e : entries) {
        v.push_back(e.r_gw);
    }
    return v;
}

RegionPairing pair_regions(const BinaryMap& b_g, const RegionSet& white_set,
                           const RegionSet& green_set) {
    auto same = [&](const LabelMap& m) {
        return m.width() == b_g.width() && m.height() == b_g.height();
    };
    if (!same(white_set.label_map) || !same(green_set.label_map)) {
        throw InvalidArgument("pair_regions: dimension mismatch");
    }
    BinaryMap overlap(b_g.width(), b_g.height());
    for (std::size_t i = 0; i < overlap.size(); ++i) {
        overlap[i] = (b_g[i] != 0 && white_set.label_map[i] != 0 && green_set.label_map[i] != 0) ? 1 : 0;
    }
    RegionSet intersections = label_components(overlap, Connectivity::Eight);

    RegionPairing pairing;
    pairing.entries.reserve(intersections.size());
    for (Region& inter : intersections.regions) {
        const std::uint32_t first = inter.pixels.front();
        PairEntry e;
        e.nucleus_label = white_set.label_map[first];
        e.body_label = green_set.label_map[first];
#ifndef NDEBUG
        for (std::uint32_t p : inter.pixels) {
            assert(white_set.label_map[p] == e.nucleus_label);
            assert(green_set.label_map[p] == e.body_label);
        }
#endif
        e.nucleus_area = white_set.by_label(e.nucleus_label).area;
        e.body_area = green_set.by_label(e.body_label).area;
        const auto a = static_cast<double>(inter.area);
        e.r_wi = static_cast<double>(e.nucleus_area) / a;
        e.r_gw = static_cast<double>(e.body_area) / a;
        e.intersection = std::move(inter);
        pairing.entries.push_back(std::move(e));
    }
    return pairing;
}

std::optional<double> mean_ratio(std::span<const double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace oslo
