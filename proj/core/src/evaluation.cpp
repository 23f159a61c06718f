#include "oslo/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "oslo/error.hpp"
#include "oslo/image_io.hpp"

namespace oslo {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        out.push_back(first == std::string::npos ? std::string{}
                                                 : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

double parse_double(const std::string& s, const fs::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw IoError("malformed number '" + s + "' in " + path.string());
    }
}

std::string format_fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

}  // namespace

std::vector<PointD> GroundTruth::centroids() const {
    std::vector<PointD> out;
    out.reserve(cells.size());
    for (const auto& c : cells) {
        out.push_back(c.centroid);
    }
    return out;
}

MatchCounts match_detections(std::span<const PointD> pred, std::span<const PointD> truth,
                             double radius) {
    if (!(radius > 0.0)) {
        throw InvalidArgument("match radius must be positive");
    }
    struct Candidate {
        double d2;
        std::size_t p;
        std::size_t t;
    };
    std::vector<Candidate> candidates;
    const double r2 = radius * radius;
    for (std::size_t p = 0; p < pred.size(); ++p) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const double dx = pred[p].x - truth[t].x;
            const double dy = pred[p].y - truth[t].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 <= r2) {
                candidates.push_back({d2, p, t});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.p != b.p) return a.p < b.p;
        return a.t < b.t;
    });
    std::vector<bool> pred_used(pred.size(), false);
    std::vector<bool> truth_used(truth.size(), false);
    MatchCounts m;
    for (const Candidate& c : candidates) {
        if (!pred_used[c.p] && !truth_used[c.t]) {
            pred_used[c.p] = true;
            truth_used[c.t] = true;
            ++m.tp;
        }
    }
    m.fp = pred.size() - m.tp;
    m.fn = truth.size() - m.tp;
    return m;
}

MatchCounts match_detections(std::span<const PointD> pred, const GroundTruth& truth, double radius) {
    const std::vector<PointD> t = truth.centroids();
    return match_detections(pred, t, radius);
}

double precision_of(const MatchCounts& m) noexcept {
    const std::size_t d = m.tp + m.fp;
    return d == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(d);
}

double recall_of(const MatchCounts& m) noexcept {
    const std::size_t d = m.tp + m.fn;
    return d == 0 ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(d);
}

double f1_score(double precision, double recall) {
    if (!(precision >= 0.0 && precision <= 1.0) || !(recall >= 0.0 && recall <= 1.0)) {
        throw InvalidArgument("precision and recall must lie in [0,1]");
    }
    const double s = precision + recall;
    return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
    const auto lines = read_lines(path);
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        const fs::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i][0] == '#') {
            continue;
        }
        const auto f = split_csv_line(lines[i]);
        if (f.size() >= 1 && f[0] == "image_id") {
            continue;
        }
        if (f.size() != 4 || f[0].empty()) {
            throw IoError("manifest line " + std::to_string(i + 1) + " needs 4 fields: " +
                          path.string());
        }
        entries.push_back({f[0], resolve(f[1]), resolve(f[2]), resolve(f[3])});
    }
    if (entries.empty()) {
        throw IoError("manifest lists no images: " + path.string());
    }
    return entries;
}

std::string manifest_csv(std::span<const ManifestEntry> entries) {
    std::ostringstream out;
    out << "image_id,green_path,white_path,truth_path\n";
    for (const auto& e : entries) {
        out << e.image_id << ',' << e.green_path.generic_string() << ','
            << e.white_path.generic_string() << ',' << e.truth_path.generic_string() << '\n';
    }
    return out.str();
}

GroundTruth load_ground_truth(const fs::path& path, const std::string& image_id) {
    GroundTruth truth;
    truth.image_id = image_id;
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") {
        const LabelMap labels = load_label_png(path);
        const RegionSet set = regions_from_labels(labels);
        // regions_from_labels renumbers; recover the original label from any pixel.
        for (const Region& r : set.regions) {
            truth.cells.push_back({r.centroid, labels[r.pixels.front()]});
        }
        return truth;
    }
    const auto lines = read_lines(path);
    bool header_seen = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const auto f = split_csv_line(lines[i]);
        if (!header_seen) {
            if (f.size() != 3 || f[0] != "image_id" || f[1] != "x" || f[2] != "y") {
                throw IoError("ground truth must start with header image_id,x,y: " + path.string());
            }
            header_seen = true;
            continue;
        }
        if (f.size() != 3) {
            throw IoError("ground truth line " + std::to_string(i + 1) + " needs 3 fields: " +
                          path.string());
        }
        if (f[0] != image_id) {
            continue;
        }
        const PointD c{parse_double(f[1], path), parse_double(f[2], path)};
        if (c.x < 0.0 || c.y < 0.0) {
            throw IoError("ground truth centroid out of bounds in " + path.string());
        }
        truth.cells.push_back({c, std::nullopt});
    }
    if (!header_seen) {
        throw IoError("empty ground truth file: " + path.string());
    }
    return truth;
}

std::string ground_truth_csv(const GroundTruth& truth) {
    std::ostringstream out;
    out << "image_id,x,y\n" << std::setprecision(17);
    for (const auto& c : truth.cells) {
        out << truth.image_id << ',' << c.centroid.x << ',' << c.centroid.y << '\n';
    }
    return out.str();
}

EvalRow score_detections(const std::string& image_id, Method method,
                         std::span<const PointD> predictions, const GroundTruth& truth,
                         double radius) {
    EvalRow row;
    row.image_id = image_id;
    row.method = method;
    row.counts = match_detections(predictions, truth, radius);
    row.precision = precision_of(row.counts);
    row.recall = recall_of(row.counts);
    row.f1 = f1_score(row.precision, row.recall);
    return row;
}

std::vector<MethodAverage> average_by_method(std::span<const EvalRow> rows,
                                             std::span<const Method> methods) {
    std::vector<MethodAverage> out;
    for (Method m : methods) {
        MethodAverage avg;
        avg.method = m;
        for (const EvalRow& r : rows) {
            if (r.method != m) {
                continue;
            }
            if (!r.ok()) {
                ++avg.failures;
                continue;
            }
            ++avg.images;
            avg.precision += r.precision;
            avg.recall += r.recall;
            avg.f1 += r.f1;
        }
        if (avg.images > 0) {
            const auto n = static_cast<double>(avg.images);
            avg.precision /= n;
            avg.recall /= n;
            avg.f1 /= n;
        }
        out.push_back(avg);
    }
    return out;
}

std::vector<PointD> detection_centroids(const SegmentationResult& result) {
    std::vector<PointD> out;
    out.reserve(result.detections.size());
    for (const auto& d : result.detections) {
        out.push_back(d.nucleus_centroid);
    }
    return out;
}

EvalReport evaluate_dataset(std::span<const ManifestEntry> manifest,
                            std::span<const Method> methods, const PipelineConfig& config,
                            std::size_t workers) {
    config.validate();
    if (manifest.empty()) {
        throw InvalidArgument("evaluate_dataset: empty manifest");
    }
    if (methods.empty()) {
        throw InvalidArgument("evaluate_dataset: no methods selected");
    }
    std::vector<std::vector<EvalRow>> per_entry(manifest.size());

    auto evaluate_one = [&](std::size_t i) {
        const ManifestEntry& e = manifest[i];
        std::vector<EvalRow>& rows = per_entry[i];
        auto fail_all = [&](const std::string& why) {
            rows.clear();
            for (Method m : methods) {
                EvalRow r;
                r.image_id = e.image_id;
                r.method = m;
                r.error = why;
                rows.push_back(std::move(r));
            }
        };
        try {
            const IntensityImage green = load_channel(e.green_path);
            const IntensityImage white = load_channel(e.white_path);
            const GroundTruth truth = load_ground_truth(e.truth_path, e.image_id);
            for (const TruthCell& c : truth.cells) {
                if (c.centroid.x >= green.width() || c.centroid.y >= green.height()) {
                    throw IoError("ground truth centroid outside the image: " +
                                  e.truth_path.string());
                }
            }
            const FrontEnd front = compute_front_end(green, white, config);
            for (Method m : methods) {
                try {
                    const PipelineRun run = run_method(front, m, config);
                    const auto pred = detection_centroids(run.result);
                    rows.push_back(score_detections(e.image_id, m, pred, truth, config.match_radius));
                } catch (const PipelineError& err) {
                    EvalRow r;
                    r.image_id = e.image_id;
                    r.method = m;
                    r.error = err.what();
                    rows.push_back(std::move(r));
                }
            }
        } catch (const std::exception& err) {
            fail_all(err.what());
        }
    };

    const std::size_t pool = std::clamp<std::size_t>(workers, 1, manifest.size());
    if (pool == 1) {
        for (std::size_t i = 0; i < manifest.size(); ++i) {
            evaluate_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < pool; ++t) {
            threads.emplace_back([&] {
                for (std::size_t i = next++; i < manifest.size(); i = next++) {
                    evaluate_one(i);
                }
            });
        }
    }

    EvalReport report;
    std::vector<std::size_t> order(manifest.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return manifest[a].image_id < manifest[b].image_id;
    });
    for (std::size_t i : order) {
        for (auto& row : per_entry[i]) {
            report.per_image.push_back(std::move(row));
        }
    }
    report.averages = average_by_method(report.per_image, methods);
    return report;
}

std::string report_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "image_id,method,tp,fp,fn,precision,recall,f1,error\n";
    for (const auto& r : report.per_image) {
        out << r.image_id << ',' << to_string(r.method) << ',' << r.counts.tp << ','
            << r.counts.fp << ',' << r.counts.fn << ',' << format_fixed(r.precision, 6) << ','
            << format_fixed(r.recall, 6) << ',' << format_fixed(r.f1, 6) << ',';
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        out << err << '\n';
    }
    for (const auto& a : report.averages) {
        out << "average," << to_string(a.method) << ",,,," << format_fixed(a.precision, 6) << ','
            << format_fixed(a.recall, 6) << ',' << format_fixed(a.f1, 6) << ",\n";
    }
    return out.str();
}

std::string report_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["per_image"] = nlohmann::ordered_json::array();
    for (const auto& r : report.per_image) {
        nlohmann::ordered_json row;
        row["image_id"] = r.image_id;
        row["method"] = std::string(to_string(r.method));
        row["tp"] = r.counts.tp;
        row["fp"] = r.counts.fp;
        row["fn"] = r.counts.fn;
        row["precision"] = r.precision;
        row["recall"] = r.recall;
        row["f1"] = r.f1;
        if (!r.ok()) {
            row["error"] = r.error;
        }
        j["per_image"].push_back(std::move(row));
    }
    j["averages"] = nlohmann::ordered_json::array();
    for (const auto& a : report.averages) {
        j["averages"].push_back({{"method", std::string(to_string(a.method))},
                                 {"images", a.images},
                                 {"failures", a.failures},
                                 {"precision", a.precision},
                                 {"recall", a.recall},
                                 {"f1", a.f1}});
    }
    return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& report, std::span<const Method> methods) {
    std::size_t id_width = 4;
    for (const auto& r : report.per_image) {
        id_width = std::max(id_width, r.image_id.size());
    }
    constexpr int kCol = 10;
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(id_width)) << "No.";
    for (Method m : methods) {
        out << std::right << std::setw(kCol) << to_string(m);
    }
    out << '\n';

    std::map<std::string, std::map<Method, const EvalRow*>> grid;
    std::vector<std::string> ids;
    for (const auto& r : report.per_image) {
        if (grid.find(r.image_id) == grid.end()) {
            ids.push_back(r.image_id);
        }
        grid[r.image_id][r.method] = &r;
    }
    for (const auto& id : ids) {
        out << std::left << std::setw(static_cast<int>(id_width)) << id;
        for (Method m : methods) {
            const auto it = grid[id].find(m);
            std::string cell = "-";
            if (it != grid[id].end() && it->second->ok()) {
                cell = format_fixed(it->second->f1, 2);
            } else if (it != grid[id].end()) {
                cell = "err";
            }
            out << std::right << std::setw(kCol) << cell;
        }
        out << '\n';
    }
    out << std::left << std::setw(static_cast<int>(id_width)) << "Ave";
    for (Method m : methods) {
        std::string cell = "-";
        for (const auto& a : report.averages) {
            if (a.method == m && a.images > 0) {
                cell = format_fixed(a.f1, 2);
            }
        }
        out << std::right << std::setw(kCol) << cell;
    }
    out << '\n';
    return out.str();
}

}  // namespace oslo
