#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "oslo/error.hpp"

namespace {

using oslo::PipelineConfig;

// Flags shared by detect, evaluate and dump-stages. Config-file values are
// applied first; explicit flags override them.
struct ConfigFlags {
    std::string config_file;
    std::vector<std::string> overrides;  ///< key=value
    std::string lambda;

    void add(CLI::App* app) {
        app->add_option("--config", config_file, "key = value config file");
        app->add_option("--set", overrides, "override a config key (key=value), repeatable");
        app->add_option("--lambda", lambda, "fix the weight in [0,1] instead of searching");
    }

    PipelineConfig build() const {
        PipelineConfig config = config_file.empty() ? PipelineConfig{} : oslo::load_config(config_file);
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw oslo::InvalidArgument("--set expects key=value, got '" + kv + "'");
            }
            config.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!lambda.empty()) {
            config.set("lambda", lambda);
        }
        config.validate();
        return config;
    }
};

void add_inputs(CLI::App* app, std::string& combined, std::string& green, std::string& white) {
    auto* c = app->add_option("--input", combined, "pseudo-colored composite image");
    auto* g = app->add_option("--green", green, "green (cell body) channel image");
    auto* w = app->add_option("--white", white, "white (nucleus) channel image");
    c->excludes(g)->excludes(w);
    g->needs(w);
    w->needs(g);
}

oslo::cli::InputPaths to_inputs(const std::string& combined, const std::string& green,
                                const std::string& white) {
    oslo::cli::InputPaths in;
    if (!combined.empty()) in.combined = combined;
    if (!green.empty()) in.green = green;
    if (!white.empty()) in.white = white;
    return in;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oslo: count and segment progenitor cells in two-channel fluorescence images"};
    app.require_subcommand(1);

    oslo::cli::DetectOptions detect;
    std::string d_combined, d_green, d_white, d_out, d_method = "oslo";
    ConfigFlags d_cfg;
    auto* det = app.add_subcommand("detect", "detect, count and segment cells in one image");
    add_inputs(det, d_combined, d_green, d_white);
    det->add_option("--out", d_out, "output directory")->required();
    det->add_option("--method", d_method, "oslo | otsu | canny | bradley");
    det->add_flag("--timings", detect.timings, "include per-stage timings in summary.json");
    det->add_flag("--diagnostics", detect.diagnostics, "write diagnostics.json and cost_curves.png");
    det->add_flag("--regions", detect.regions_csv, "write per-region statistics to regions.csv");
    det->add_flag("--saliency", detect.saliency_png, "write saliency maps as PNG");
    d_cfg.add(det);

    oslo::cli::EvaluateOptions evaluate;
    std::string e_manifest, e_out;
    std::vector<std::string> e_methods{"oslo"};
    ConfigFlags e_cfg;
    auto* ev = app.add_subcommand("evaluate", "score methods against ground truth");
    ev->add_option("--manifest", e_manifest, "CSV image_id,green_path,white_path,truth_path")
        ->required();
    ev->add_option("--methods", e_methods, "methods to run (oslo otsu canny bradley, or all)")
        ->delimiter(',');
    ev->add_option("--workers", evaluate.workers, "worker threads")->check(CLI::PositiveNumber);
    ev->add_option("--out", e_out, "output directory")->required();
    e_cfg.add(ev);

    oslo::cli::GenerateOptions generate;
    std::string g_out;
    auto* gen = app.add_subcommand("generate", "write a synthetic suite with ground truth");
    gen->add_option("--suite", generate.suite, "easy | hard")->required();
    gen->add_option("--seed", generate.seed, "random seed")->required();
    gen->add_option("--out", g_out, "output directory")->required();
    gen->add_option("--limit", generate.limit, "write only the first N images");

    oslo::cli::DumpOptions dump;
    std::string s_combined, s_green, s_white, s_out;
    ConfigFlags s_cfg;
    auto* dmp = app.add_subcommand("dump-stages", "write intermediate maps as PNG");
    add_inputs(dmp, s_combined, s_green, s_white);
    dmp->add_option("--out", s_out, "output directory")->required();
    s_cfg.add(dmp);

    CLI11_PARSE(app, argc, argv);

    try {
        if (det->parsed()) {
            detect.input = to_inputs(d_combined, d_green, d_white);
            detect.out_dir = d_out;
            const auto method = oslo::parse_method(d_method);
            if (!method) {
                throw oslo::InvalidArgument("unknown method '" + d_method + "'");
            }
            detect.method = *method;
            detect.config = d_cfg.build();
            return oslo::cli::cmd_detect(detect);
        }
        if (ev->parsed()) {
            evaluate.manifest = e_manifest;
            evaluate.out_dir = e_out;
            evaluate.methods.clear();
            for (const std::string& name : e_methods) {
                if (name == "all") {
                    evaluate.methods = {oslo::Method::Otsu, oslo::Method::Canny,
                                        oslo::Method::Bradley, oslo::Method::Oslo};
                    break;
                }
                const auto method = oslo::parse_method(name);
                if (!method) {
                    throw oslo::InvalidArgument("unknown method '" + name + "'");
                }
                evaluate.methods.push_back(*method);
            }
            evaluate.config = e_cfg.build();
            return oslo::cli::cmd_evaluate(evaluate);
        }
        if (gen->parsed()) {
            generate.out_dir = g_out;
            return oslo::cli::cmd_generate(generate);
        }
        if (dmp->parsed()) {
            dump.input = to_inputs(s_combined, s_green, s_white);
            dump.out_dir = s_out;
            dump.config = s_cfg.build();
            return oslo::cli::cmd_dump_stages(dump);
        }
    } catch (const oslo::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return oslo::cli::kExitIo;
    } catch (const oslo::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return oslo::cli::kExitPipeline;
    }
    return oslo::cli::kExitOk;
}
