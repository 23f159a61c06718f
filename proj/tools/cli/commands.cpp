#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "oslo/error.hpp"
#include "oslo/evaluation.hpp"
#include "oslo/image_io.hpp"
#include "oslo/render.hpp"
#include "oslo/synthetic.hpp"

namespace oslo::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

// Best effort: the output directory itself may be the problem.
void write_error_json(const fs::path& dir, std::string_view kind, const std::string& message,
                      int exit_code) {
    try {
        ensure_dir(dir);
        json j;
        j["error"] = kind;
        j["message"] = message;
        j["exit_code"] = exit_code;
        write_text_file(dir / "error.json", j.dump(2) + "\n");
    } catch (const std::exception&) {
    }
}

template <typename Fn>
int guarded(const fs::path& out_dir, Fn&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_json(out_dir, "io_error", e.what(), kExitIo);
        return kExitIo;
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_json(out_dir, "pipeline_error", e.what(), kExitPipeline);
        return kExitPipeline;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_error_json(out_dir, "invalid_argument", e.what(), kExitPipeline);
        return kExitPipeline;
    }
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json summary_json(const PipelineRun& run, int width, int height, bool with_timings) {
    json j;
    j["method"] = std::string(to_string(run.method));
    j["width"] = width;
    j["height"] = height;
    j["count"] = run.result.count;
    if (run.minimax) {
        const MinimaxResult& mm = *run.minimax;
        j["lambda_star"] = mm.lambda_star;
        j["l_g"] = mm.l_g;
        j["e_star"] = mm.e_star;
        j["m"] = run.ratios ? run.ratios->samples[mm.level_index].m_count : 0;
    } else {
        j["lambda_star"] = nullptr;
        j["l_g"] = nullptr;
        j["e_star"] = nullptr;
        j["m"] = run.method == Method::Oslo ? json(0) : json(run.pairing.m_count());
    }
    j["r_uwi"] = optional_number(run.bound);
    j["intersections"] = run.pairing.m_count();
    if (with_timings) {
        json t = json::object();
        for (const StageTiming& s : run.timings) {
            t[s.stage] = s.milliseconds;
        }
        j["timings_ms"] = t;
    }
    return j;
}

std::string detections_csv(const SegmentationResult& result) {
    std::string out = "id,centroid_x,centroid_y,marker_area,r_wi\n";
    for (const Detection& d : result.detections) {
        out += std::to_string(d.id) + "," + fixed(d.nucleus_centroid.x, 3) + "," +
               fixed(d.nucleus_centroid.y, 3) + "," + std::to_string(d.marker_region.area) + "," +
               fixed(d.r_wi) + "\n";
    }
    return out;
}

std::string regions_csv(const PipelineRun& run) {
    std::string out =
        "label,area,centroid_x,centroid_y,nucleus_label,body_label,nucleus_area,body_area,r_wi,r_gw\n";
    for (const PairEntry& e : run.pairing.entries) {
        out += std::to_string(e.intersection.label) + "," + std::to_string(e.intersection.area) +
               "," + fixed(e.intersection.centroid.x, 3) + "," +
               fixed(e.intersection.centroid.y, 3) + "," + std::to_string(e.nucleus_label) + "," +
               std::to_string(e.body_label) + "," + std::to_string(e.nucleus_area) + "," +
               std::to_string(e.body_area) + "," + fixed(e.r_wi) + "," + fixed(e.r_gw) + "\n";
    }
    return out;
}

json diagnostics_json(const PipelineRun& run) {
    json j;
    if (!run.minimax || !run.ratios) {
        j["lambda_star"] = nullptr;
        return j;
    }
    const MinimaxResult& mm = *run.minimax;
    j["lambda_star"] = mm.lambda_star;
    j["l_g"] = mm.l_g;
    j["e_star"] = mm.e_star;
    json levels = json::array();
    for (const RatioSample& s : run.ratios->samples) {
        levels.push_back({{"level", s.level},
                          {"r1_mean", s.r1_mean},
                          {"r2_mean", s.r2_mean},
                          {"m", s.m_count}});
    }
    j["ratios"] = levels;
    json curves = json::array();
    for (const CostCurve& c : mm.curves) {
        json costs = json::array();
        for (const CostSample& s : c.samples) {
            costs.push_back(std::isfinite(s.cost) ? json(s.cost) : json(nullptr));
        }
        json entry;
        entry["lambda"] = c.lambda;
        entry["e_min"] = c.best ? json(c.best->cost) : json(nullptr);
        entry["l_min"] = c.best ? json(c.best->level) : json(nullptr);
        entry["cost"] = costs;
        curves.push_back(entry);
    }
    j["curves"] = curves;
    return j;
}

}  // namespace

std::pair<IntensityImage, IntensityImage> load_inputs(const InputPaths& input) {
    if (input.combined) {
        if (input.green || input.white) {
            throw InvalidArgument("give either a combined image or a green/white pair, not both");
        }
        LoadedImage img = load_image(*input.combined);
        if (auto* combined = std::get_if<CombinedImage>(&img)) {
            return extract_channels(*combined);
        }
        throw IoError("combined input must be a color image: " + input.combined->string());
    }
    if (!input.green || !input.white) {
        throw InvalidArgument("both --green and --white are required without --input");
    }
    IntensityImage green = load_channel(*input.green);
    IntensityImage white = load_channel(*input.white);
    if (green.width() != white.width() || green.height() != white.height()) {
        throw InvalidArgument("green and white channels differ in size");
    }
    return {std::move(green), std::move(white)};
}

int cmd_detect(const DetectOptions& options) {
    return guarded(options.out_dir, [&] {
        options.config.validate();
        auto [green, white] = load_inputs(options.input);
        ensure_dir(options.out_dir);
        const fs::path& dir = options.out_dir;

        std::vector<StageTiming> timings;
        const FrontEnd front = compute_front_end(green, white, options.config, &timings);
        PipelineRun run = run_method(front, options.method, options.config);
        timings.insert(timings.end(), run.timings.begin(), run.timings.end());
        run.timings = std::move(timings);

        save_label_png16(dir / "labels.png", run.result.label_map);
        save_png_rgb8(dir / "overlay.png",
                      render_overlay(green, white, run.result.label_map, run.result.detections));
        write_text_file(dir / "detections.csv", detections_csv(run.result));
        write_text_file(dir / "summary.json",
                        summary_json(run, green.width(), green.height(), options.timings).dump(2) +
                            "\n");
        if (options.diagnostics) {
            write_text_file(dir / "diagnostics.json", diagnostics_json(run).dump(2) + "\n");
            if (run.minimax) {
                save_png_rgb8(dir / "cost_curves.png", plot_cost_curves(*run.minimax));
            }
        }
        if (options.regions_csv) {
            write_text_file(dir / "regions.csv", regions_csv(run));
        }
        if (options.saliency_png) {
            save_png_gray8(dir / "saliency_white.png", to_gray8(front.s_w));
            save_png_gray8(dir / "saliency_green.png", to_gray8(front.s_g));
        }
        std::cout << run.result.count << "\n";
        return kExitOk;
    });
}

int cmd_evaluate(const EvaluateOptions& options) {
    return guarded(options.out_dir, [&] {
        options.config.validate();
        if (options.methods.empty()) {
            throw InvalidArgument("no methods selected");
        }
        const std::vector<ManifestEntry> manifest = load_manifest(options.manifest);
        ensure_dir(options.out_dir);
        const EvalReport report =
            evaluate_dataset(manifest, options.methods, options.config, options.workers);
        write_text_file(options.out_dir / "report.csv", report_csv(report));
        write_text_file(options.out_dir / "report.json", report_json(report));
        const std::string table = report_table(report, options.methods);
        write_text_file(options.out_dir / "table.txt", table);
        std::cout << table;

        std::size_t failures = 0;
        for (const EvalRow& row : report.per_image) {
            if (!row.ok()) {
                ++failures;
                std::cerr << "warning: " << row.image_id << " (" << to_string(row.method)
                          << "): " << row.error << "\n";
            }
        }
        return failures == report.per_image.size() ? kExitFailure : kExitOk;
    });
}

int cmd_generate(const GenerateOptions& options) {
    return guarded(options.out_dir, [&] {
        const auto kind = parse_suite(options.suite);
        if (!kind) {
            throw InvalidArgument("unknown suite '" + options.suite + "' (easy|hard)");
        }
        const auto entries = write_suite(options.out_dir, *kind, options.seed, options.limit);
        std::cout << entries.size() << " images written to " << options.out_dir.string() << "\n";
        return kExitOk;
    });
}

int cmd_dump_stages(const DumpOptions& options) {
    return guarded(options.out_dir, [&] {
        options.config.validate();
        auto [green, white] = load_inputs(options.input);
        ensure_dir(options.out_dir);
        const fs::path& dir = options.out_dir;
        const FrontEnd front = compute_front_end(green, white, options.config);
        save_png_gray8(dir / "s_w.png", to_gray8(front.s_w));
        save_png_gray8(dir / "s_g.png", to_gray8(front.s_g));
        save_png_gray8(dir / "b_w1.png", to_gray8(front.b_w1));
        save_png_gray8(dir / "b_w2.png", to_gray8(front.b_w2));
        save_png_gray8(dir / "b_w.png", to_gray8(front.b_w));
        const PipelineRun run = run_method(front, Method::Oslo, options.config);
        save_png_gray8(dir / "b_g.png", to_gray8(run.b_g));
        save_png_gray8(dir / "b_c.png", to_gray8(run.b_c));
        save_png_rgb8(dir / "markers.png", colorize_labels(run.markers.label_map));
        save_png_rgb8(dir / "segments.png", colorize_labels(run.result.label_map));
        if (run.minimax) {
            save_png_rgb8(dir / "cost_curves.png", plot_cost_curves(*run.minimax));
        }
        return kExitOk;
    });
}

}  // namespace oslo::cli
