#include "oslo/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "oslo/error.hpp"

namespace oslo {

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>* sink) : sink_(sink) {}

    void lap(std::string stage) {
        const auto now = std::chrono::steady_clock::now();
        if (sink_ != nullptr) {
            sink_->push_back(
                {std::move(stage), std::chrono::duration<double, std::milli>(now - last_).count()});
        }
        last_ = now;
    }

private:
    std::vector<StageTiming>* sink_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

int default_bradley_window(int width) {
    int w = std::max(3, width / 8);
    return w % 2 == 0 ? w + 1 : w;
}

BinaryMap baseline_green_map(const SaliencyMap& s_g, Method method, const PipelineConfig& config) {
    switch (method) {
        case Method::Otsu:
            return otsu_binarize(s_g);
        case Method::Canny:
            return fill_holes(canny_edges(s_g.as_image(), config.canny));
        case Method::Bradley: {
            const int window = config.bradley_window != 0 ? config.bradley_window
                                                          : default_bradley_window(s_g.width());
            return bradley_threshold(s_g.as_image(), window, config.bradley_sensitivity);
        }
        case Method::Oslo:
            break;
    }
    throw InvalidArgument("baseline_green_map: not a baseline method");
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Oslo: return "oslo";
        case Method::Otsu: return "otsu";
        case Method::Canny: return "canny";
        case Method::Bradley: return "bradley";
    }
    return "oslo";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (Method m : {Method::Oslo, Method::Otsu, Method::Canny, Method::Bradley}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    if (name == "otsu_baseline") return Method::Otsu;
    if (name == "canny_baseline") return Method::Canny;
    if (name == "bradley_baseline") return Method::Bradley;
    return std::nullopt;
}

FrontEnd compute_front_end(const IntensityImage& green, const IntensityImage& white,
                           const PipelineConfig& config, std::vector<StageTiming>* timings) {
    config.validate();
    if (green.width() != white.width() || green.height() != white.height()) {
        throw InvalidArgument("green and white channels differ in dimensions");
    }
    if (green.empty()) {
        throw InvalidArgument("empty input image");
    }
    StageClock clock(timings);
    const GaussianKernel kernel = GaussianKernel::binomial(config.blur_radius);
    FrontEnd f;
    f.s_w = normalize(ft_saliency(white, kernel));
    f.s_g = normalize(ft_saliency(green, kernel));
    clock.lap("saliency");

    f.b_w1 = otsu_binarize(f.s_w);
    f.b_w2 = fill_holes(canny_edges(f.s_w.as_image(), config.canny));
    f.b_w = fuse_white(f.b_w1, f.b_w2);
    f.white_set = filter_small(label_components(f.b_w, Connectivity::Eight), config.min_area);
    clock.lap("white_binarize");
    return f;
}

PipelineRun run_method(const FrontEnd& front, Method method, const PipelineConfig& config) {
    config.validate();
    PipelineRun run;
    run.method = method;
    StageClock clock(&run.timings);
    const int w = front.s_g.width();
    const int h = front.s_g.height();
    run.result.label_map = LabelMap(w, h, 0);
    run.markers.label_map = LabelMap(w, h, 0);

    if (method == Method::Oslo) {
        const std::vector<double> levels = uniform_grid(config.level_grid);
        if (front.white_set.regions.empty()) {
            // Nothing to pair with; every level is infeasible, the count is 0.
            run.b_g = BinaryMap(w, h);
        } else {
            run.ratios = build_ratio_table(front.s_g, front.white_set, levels,
                                           RatioOptions{config.min_area});
            clock.lap("ratio_table");
            if (config.fixed_lambda) {
                run.minimax = select_with_fixed_lambda(*config.fixed_lambda, *run.ratios);
            } else {
                const std::vector<double> lambdas = uniform_grid(config.lambda_grid);
                run.minimax = minimax_select(lambdas, *run.ratios);
            }
            clock.lap("minimax");
            run.b_g = threshold_at(front.s_g, run.minimax->l_g);
        }
    } else {
        run.b_g = baseline_green_map(front.s_g, method, config);
        clock.lap("green_binarize");
    }

    run.green_set = filter_small(label_components(run.b_g, Connectivity::Eight), config.min_area);
    run.pairing = pair_regions(run.b_g, front.white_set, run.green_set);
    run.b_c = candidate_map(front.b_w, run.b_g);
    clock.lap("pairing");

    if (run.pairing.m_count() == 0) {
        return run;
    }
    run.bound = ratio_upper_bound(run.pairing.r_wi_values());
    std::vector<Detection> detections =
        count_and_mark(run.pairing, *run.bound, front.white_set, run.green_set);
    if (detections.empty()) {
        return run;
    }
    run.markers = markers_from_detections(detections, w, h);
    clock.lap("markers");

    if (config.surface == SurfaceMode::Distance) {
        run.surface = squared_distance_transform(run.b_c);
        for (double& v : run.surface.values()) {
            v = -std::sqrt(v);
        }
    } else {
        run.surface = sobel_magnitude(front.s_g.grid());
    }
    run.result.label_map = watershed(run.surface, run.markers, run.b_c);
    run.result.count = detections.size();
    run.result.detections = std::move(detections);
    clock.lap("watershed");
    return run;
}

PipelineRun run_detailed(const IntensityImage& green, const IntensityImage& white,
                         const PipelineConfig& config, Method method) {
    std::vector<StageTiming> timings;
    const FrontEnd front = compute_front_end(green, white, config, &timings);
    PipelineRun run = run_method(front, method, config);
    timings.insert(timings.end(), run.timings.begin(), run.timings.end());
    run.timings = std::move(timings);
    return run;
}

SegmentationResult run_pipeline(const IntensityImage& green, const IntensityImage& white,
                                const PipelineConfig& config) {
    return run_detailed(green, white, config, Method::Oslo).result;
}

}  // namespace oslo
