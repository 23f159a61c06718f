#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "oslo/regions.hpp"
#include "oslo/saliency.hpp"

namespace oslo {

inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

/// n uniformly spaced values k / (n - 1), k = 0..n-1.
std::vector<double> uniform_grid(std::size_t n);

/// Mean nucleus/intersection and body/intersection area ratios at one level.
/// The ratio terms depend on the level only, so one table serves every weight.
struct RatioSample {
    double level = 0.0;
    double r1_mean = 0.0;  ///< mean of R_wi over intersecting regions
    double r2_mean = 0.0;  ///< mean of R_gw over intersecting regions
    std::size_t m_count = 0;

    bool feasible() const noexcept { return m_count > 0; }
};

/// Ratio samples over an ascending level grid.
struct RatioTable {
    std::vector<RatioSample> samples;
};

struct RatioOptions {
    /// Green components smaller than this are discarded before pairing.
    std::size_t min_area = 5;
};

/// Reference route: threshold the green saliency at `level`, label 8-connected
/// components, drop small ones, pair with the white regions and average.
RatioSample ratios_at(double level, const RegionSet& white_set, const SaliencyMap& s_g,
                      const RatioOptions& opts = {});

RatioTable build_ratio_table_direct(const SaliencyMap& s_g, const RegionSet& white_set,
                                    std::span<const double> level_grid,
                                    const RatioOptions& opts = {});

/// Same table as build_ratio_table_direct, bit for bit, computed in a single
/// sweep from the highest level down: pixels enter in order of their level
/// and two union-find forests track green components and intersection
/// components incrementally.
RatioTable build_ratio_table(const SaliencyMap& s_g, const RegionSet& white_set,
                             std::span<const double> level_grid, const RatioOptions& opts = {});

/// E = lambda * r1 + (1 - lambda) * r2, or +inf when no region intersects.
double weighted_cost(double lambda, const RatioSample& sample) noexcept;

struct CostEvaluation {
    double cost = kInfeasibleCost;
    double r1_mean = 0.0;
    double r2_mean = 0.0;
    std::size_t m_count = 0;
};

CostEvaluation cost_at(double lambda, double level, const RegionSet& white_set,
                       const SaliencyMap& s_g, const RatioOptions& opts = {});

struct CostSample {
    double level = 0.0;
    double cost = kInfeasibleCost;
    double r1_mean = 0.0;
    double r2_mean = 0.0;
    std::size_t m_count = 0;
};

struct LevelChoice {
    std::size_t index = 0;
    double level = 0.0;
    double cost = kInfeasibleCost;
};

/// Cost profile over all levels for one weight, with its minimizer.
struct CostCurve {
    double lambda = 0.0;
    std::vector<CostSample> samples;
    std::optional<LevelChoice> best;  ///< empty when no level is feasible
};

/// Minimizing level for a fixed weight: smallest level on ties, nullopt when
/// every level is infeasible.
std::optional<LevelChoice> inner_minimize(double lambda, const RatioTable& table);

CostCurve cost_curve(double lambda, const RatioTable& table);

struct MinimaxResult {
    double lambda_star = 0.0;
    std::size_t lambda_index = 0;
    double l_g = 0.0;
    std::size_t level_index = 0;
    double e_star = 0.0;
    std::vector<CostCurve> curves;
};

/// Weight maximizing the minimized cost (smallest weight on ties) and the
/// level that minimizes the cost at that weight. Throws PipelineError when no
/// level yields an intersecting region for any weight.
MinimaxResult minimax_select(std::span<const double> lambda_grid, const RatioTable& table);

/// Skips the weight search and minimizes at a fixed weight.
MinimaxResult select_with_fixed_lambda(double lambda, const RatioTable& table);

}  // namespace oslo
