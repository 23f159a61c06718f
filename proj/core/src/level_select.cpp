#include "oslo/level_select.hpp"

#include <algorithm>
#include <numeric>

#include "oslo/error.hpp"

namespace oslo {

namespace {

void check_level_grid(std::span<const double> grid) {
    if (grid.empty()) {
        throw InvalidArgument("level grid must be non-empty");
    }
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw InvalidArgument("level grid must be ascending");
    }
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n, kInactive), size_(n, 0), min_index_(n, 0) {}

    bool active(std::uint32_t i) const noexcept { return parent_[i] != kInactive; }

    void activate(std::uint32_t i) noexcept {
        parent_[i] = i;
        size_[i] = 1;
        min_index_[i] = i;
    }

    std::uint32_t find(std::uint32_t i) noexcept {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::uint32_t a, std::uint32_t b) noexcept {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (size_[a] < size_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        size_[a] += size_[b];
        min_index_[a] = std::min(min_index_[a], min_index_[b]);
    }

    bool is_root(std::uint32_t i) const noexcept { return parent_[i] == i; }
    std::uint32_t size(std::uint32_t root) const noexcept { return size_[root]; }
    std::uint32_t min_index(std::uint32_t root) const noexcept { return min_index_[root]; }

private:
    static constexpr std::uint32_t kInactive = 0xFFFFFFFFu;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::uint32_t> min_index_;
};

}  // namespace

std::vector<double> uniform_grid(std::size_t n) {
    if (n < 2) {
        throw InvalidArgument("uniform grid needs at least 2 points");
    }
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        g[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return g;
}

RatioSample ratios_at(double level, const RegionSet& white_set, const SaliencyMap& s_g,
                      const RatioOptions& opts) {
    const BinaryMap b_g = threshold_at(s_g, level);
    const RegionSet green = filter_small(label_components(b_g, Connectivity::Eight), opts.min_area);
    const RegionPairing pairing = pair_regions(b_g, white_set, green);
    RatioSample s;
    s.level = level;
    s.m_count = pairing.m_count();
    if (s.m_count > 0) {
        s.r1_mean = *mean_ratio(pairing.r_wi_values());
        s.r2_mean = *mean_ratio(pairing.r_gw_values());
    }
    return s;
}

RatioTable build_ratio_table_direct(const SaliencyMap& s_g, const RegionSet& white_set,
                                    std::span<const double> level_grid, const RatioOptions& opts) {
    check_level_grid(level_grid);
    RatioTable table;
    table.samples.reserve(level_grid.size());
    for (double level : level_grid) {
        table.samples.push_back(ratios_at(level, white_set, s_g, opts));
    }
    return table;
}

RatioTable build_ratio_table(const SaliencyMap& s_g, const RegionSet& white_set,
                             std::span<const double> level_grid, const RatioOptions& opts) {
    check_level_grid(level_grid);
    if (!s_g.grid().same_shape(white_set.label_map)) {
        throw InvalidArgument("build_ratio_table: dimension mismatch");
    }
    const int w = s_g.width();
    const int h = s_g.height();
    const std::size_t n = s_g.size();
    const std::size_t levels = level_grid.size();

    // Bucket k holds pixels whose value is >= level_grid[k] but not the next
    // level, i.e. the pixels that join the foreground when the level drops to k.
    std::vector<std::uint32_t> bucket_start(levels + 1, 0);
    std::vector<std::int32_t> bucket_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::upper_bound(level_grid.begin(), level_grid.end(), s_g[i]);
        if (it != level_grid.begin()) {
            const auto k = static_cast<std::int32_t>(it - level_grid.begin() - 1);
            bucket_of[i] = k;
            ++bucket_start[static_cast<std::size_t>(k) + 1];
        }
    }
    std::partial_sum(bucket_start.begin(), bucket_start.end(), bucket_start.begin());
    std::vector<std::uint32_t> order(bucket_start.back());
    {
        std::vector<std::uint32_t> cursor(bucket_start.begin(), bucket_start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (bucket_of[i] >= 0) {
                order[cursor[static_cast<std::size_t>(bucket_of[i])]++] = static_cast<std::uint32_t>(i);
            }
        }
    }

    const LabelMap& white_labels = white_set.label_map;
    DisjointSets green(n);
    DisjointSets inter(n);
    std::vector<std::uint32_t> inter_roots;

    struct Live {
        std::uint32_t min_index;
        std::uint32_t area;
        std::uint32_t body_area;
        std::int32_t nucleus_label;
    };
    std::vector<Live> live;

    RatioTable table;
    table.samples.resize(levels);
    for (std::size_t kk = levels; kk-- > 0;) {
        for (std::uint32_t idx = bucket_start[kk]; idx < bucket_start[kk + 1]; ++idx) {
            const std::uint32_t p = order[idx];
            const int x = static_cast<int>(p % static_cast<std::uint32_t>(w));
            const int y = static_cast<int>(p / static_cast<std::uint32_t>(w));
            const bool in_white = white_labels[p] != 0;
            green.activate(p);
            if (in_white) {
                inter.activate(p);
                inter_roots.push_back(p);
            }
            for (int dy = -1; dy <= 1; ++dy) {
                const int ny = y + dy;
                if (ny < 0 || ny >= h) {
                    continue;
                }
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx;
                    if ((dx == 0 && dy == 0) || nx < 0 || nx >= w) {
                        continue;
                    }
                    const auto q = static_cast<std::uint32_t>(static_cast<std::size_t>(ny) * w + nx);
                    if (!green.active(q)) {
                        continue;
                    }
                    green.unite(p, q);
                    if (in_white && inter.active(q)) {
                        inter.unite(p, q);
                    }
                }
            }
        }

        std::erase_if(inter_roots, [&](std::uint32_t r) { return !inter.is_root(r); });
        live.clear();
        for (std::uint32_t r : inter_roots) {
            const std::uint32_t body = green.size(green.find(r));
            if (body < opts.min_area) {
                continue;
            }
            live.push_back({inter.min_index(r), inter.size(r), body, white_labels[r]});
        }
        // Raster order of first pixel, matching label order in the direct route.
        std::sort(live.begin(), live.end(),
                  [](const Live& a, const Live& b) { return a.min_index < b.min_index; });

        RatioSample& s = table.samples[kk];
        s.level = level_grid[kk];
        s.m_count = live.size();
        if (!live.empty()) {
            double sum_wi = 0.0;
            double sum_gw = 0.0;
            for (const Live& e : live) {
                const auto a = static_cast<double>(e.area);
                sum_wi += static_cast<double>(white_set.by_label(e.nucleus_label).area) / a;
                sum_gw += static_cast<double>(e.body_area) / a;
            }
            const auto m = static_cast<double>(live.size());
            s.r1_mean = sum_wi / m;
            s.r2_mean = sum_gw / m;
        }
    }
    return table;
}

double weighted_cost(double lambda, const RatioSample& sample) noexcept {
    if (!sample.feasible()) {
        return kInfeasibleCost;
    }
    return lambda * sample.r1_mean + (1.0 - lambda) * sample.r2_mean;
}

CostEvaluation cost_at(double lambda, double level, const RegionSet& white_set,
                       const SaliencyMap& s_g, const RatioOptions& opts) {
    if (!(lambda >= 0.0 && lambda <= 1.0) || !(level >= 0.0 && level <= 1.0)) {
        throw InvalidArgument("cost_at: lambda and level must lie in [0,1]");
    }
    const RatioSample s = ratios_at(level, white_set, s_g, opts);
    return CostEvaluation{weighted_cost(lambda, s), s.r1_mean, s.r2_mean, s.m_count};
}

std::optional<LevelChoice> inner_minimize(double lambda, const RatioTable& table) {
    std::optional<LevelChoice> best;
    for (std::size_t k = 0; k < table.samples.size(); ++k) {
        const double e = weighted_cost(lambda, table.samples[k]);
        if (e == kInfeasibleCost) {
            continue;
        }
        if (!best || e < best->cost) {
            best = LevelChoice{k, table.samples[k].level, e};
        }
    }
    return best;
}

CostCurve cost_curve(double lambda, const RatioTable& table) {
    CostCurve curve;
    curve.lambda = lambda;
    curve.samples.reserve(table.samples.size());
    for (const RatioSample& s : table.samples) {
        curve.samples.push_back({s.level, weighted_cost(lambda, s), s.r1_mean, s.r2_mean, s.m_count});
    }
    curve.best = inner_minimize(lambda, table);
    return curve;
}

MinimaxResult minimax_select(std::span<const double> lambda_grid, const RatioTable& table) {
    if (lambda_grid.empty() || table.samples.empty()) {
        throw InvalidArgument("minimax_select: grids must be non-empty");
    }
    MinimaxResult result;
    result.curves.reserve(lambda_grid.size());
    bool found = false;
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        CostCurve curve = cost_curve(lambda_grid[i], table);
        if (curve.best && (!found || curve.best->cost > result.e_star)) {
            found = true;
            result.lambda_star = lambda_grid[i];
            result.lambda_index = i;
            result.l_g = curve.best->level;
            result.level_index = curve.best->index;
            result.e_star = curve.best->cost;
        }
        result.curves.push_back(std::move(curve));
    }
    if (!found) {
        throw PipelineError("no intersecting regions at any level");
    }
    return result;
}

MinimaxResult select_with_fixed_lambda(double lambda, const RatioTable& table) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument("lambda must lie in [0,1]");
    }
    const double grid[1] = {lambda};
    return minimax_select(grid, table);
}

}  // namespace oslo
