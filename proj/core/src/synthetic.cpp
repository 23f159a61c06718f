#include "oslo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "oslo/error.hpp"
#include "oslo/image_io.hpp"

namespace oslo {

namespace {

class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double uniform(const RangeD& r) noexcept { return uniform(r.lo, r.hi); }

    int uniform_int(const RangeI& r) noexcept {
        const auto span = static_cast<std::uint64_t>(r.hi - r.lo + 1);
        return r.lo + static_cast<int>(engine_() % span);
    }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

double distance(const PointD& a, const PointD& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Max-composited canvas with soft-edged stamps.
class Canvas {
public:
    Canvas(int width, int height) : layer_(width, height, 0.0) {}

    /// Disk of full amplitude inside radius - edge/2, fading linearly to 0
    /// at radius + edge/2.
    void disk(const PointD& c, double radius, double amplitude, double edge = 2.0) {
        const double outer = radius + 0.5 * edge;
        stamp(c, outer, [&](double d) {
            return amplitude * std::clamp((outer - d) / edge, 0.0, 1.0);
        });
    }

    /// Stroke dab; returns touched pixel indices through `touched`.
    template <typename Fn>
    void dab(const PointD& c, double half_width, double amplitude, Fn&& touched) {
        stamp(
            c, half_width + 0.5,
            [&](double d) { return amplitude * std::clamp(half_width + 0.5 - d, 0.0, 1.0); },
            touched);
    }

    const Grid<double>& layer() const noexcept { return layer_; }

private:
    template <typename Profile, typename Touch = void (*)(std::size_t)>
    void stamp(const PointD& c, double reach, Profile&& profile, Touch&& touched = [](std::size_t) {}) {
        const int x0 = std::max(0, static_cast<int>(std::floor(c.x - reach)));
        const int x1 = std::min(layer_.width() - 1, static_cast<int>(std::ceil(c.x + reach)));
        const int y0 = std::max(0, static_cast<int>(std::floor(c.y - reach)));
        const int y1 = std::min(layer_.height() - 1, static_cast<int>(std::ceil(c.y + reach)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double d = std::hypot(x - c.x, y - c.y);
                const double v = profile(d);
                if (v <= 0.0) {
                    continue;
                }
                double& px = layer_(x, y);
                px = std::max(px, v);
                touched(layer_.index(x, y));
            }
        }
    }

    Grid<double> layer_;
};

struct Stroke {
    std::vector<PointD> path;
    double half_width = 1.0;
};

Stroke random_walk(Random& rng, const PointD& start, double heading, double length,
                   double drift, double half_width) {
    Stroke s;
    s.half_width = half_width;
    PointD p = start;
    s.path.push_back(p);
    const int steps = static_cast<int>(std::ceil(length));
    for (int i = 0; i < steps; ++i) {
        heading += drift * rng.normal();
        p.x += std::cos(heading);
        p.y += std::sin(heading);
        s.path.push_back(p);
    }
    return s;
}

struct Placement {
    std::vector<SynthCell> cells;
    std::vector<PointD> distractors;
};

Placement place(const SynthConfig& cfg, Random& rng) {
    Placement out;
    const double margin = cfg.body_radius.hi + 4.0;
    auto random_center = [&] {
        return PointD{rng.uniform(margin, cfg.width - 1 - margin),
                      rng.uniform(margin, cfg.height - 1 - margin)};
    };
    auto inside = [&](const PointD& c) {
        return c.x >= margin && c.y >= margin && c.x <= cfg.width - 1 - margin &&
               c.y <= cfg.height - 1 - margin;
    };
    auto fits = [&](const PointD& c, double body_r, int skip) {
        for (std::size_t j = 0; j < out.cells.size(); ++j) {
            if (static_cast<int>(j) == skip) {
                continue;
            }
            const SynthCell& o = out.cells[j];
            const double d = distance(c, o.center);
            if (d < cfg.min_separation || d < body_r + o.body_radius + cfg.min_body_gap) {
                return false;
            }
        }
        return true;
    };
    auto new_cell = [&](const PointD& c, double body_r) {
        SynthCell cell;
        cell.center = c;
        cell.body_radius = body_r;
        cell.nucleus_radius = rng.uniform(cfg.nucleus_radius);
        cell.body_amplitude = rng.uniform(cfg.body_amplitude);
        cell.nucleus_amplitude = cfg.nucleus_amplitude;
        if (rng.uniform() < cfg.low_contrast_fraction) {
            cell.nucleus_amplitude *= cfg.low_contrast_scale;
        }
        return cell;
    };

    int budget = cfg.retry_budget;
    const int singles = cfg.cell_count - 2 * cfg.close_pairs;
    for (int p = 0; p < cfg.close_pairs; ++p) {
        bool placed = false;
        while (!placed && budget-- > 0) {
            const double ra = rng.uniform(cfg.body_radius);
            const double rb = rng.uniform(cfg.body_radius);
            const PointD a = random_center();
            const double gap = rng.uniform(cfg.close_pair_gap);
            const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double sep = ra + rb + gap;
            const PointD b{a.x + sep * std::cos(phi), a.y + sep * std::sin(phi)};
            if (!inside(b) || sep < cfg.min_separation || !fits(a, ra, -1) || !fits(b, rb, -1)) {
                continue;
            }
            const int ia = static_cast<int>(out.cells.size());
            out.cells.push_back(new_cell(a, ra));
            out.cells.push_back(new_cell(b, rb));
            out.cells[static_cast<std::size_t>(ia)].partner = ia + 1;
            out.cells[static_cast<std::size_t>(ia) + 1].partner = ia;
            placed = true;
        }
        if (!placed) {
            throw InvalidArgument("synthetic: cannot place close pairs under min_separation " +
                                  std::to_string(cfg.min_separation) + " within retry budget");
        }
    }
    for (int i = 0; i < singles; ++i) {
        bool placed = false;
        while (!placed && budget-- > 0) {
            const double r = rng.uniform(cfg.body_radius);
            const PointD c = random_center();
            if (fits(c, r, -1)) {
                out.cells.push_back(new_cell(c, r));
                placed = true;
            }
        }
        if (!placed) {
            throw InvalidArgument("synthetic: cannot place " + std::to_string(cfg.cell_count) +
                                  " cells under min_separation " +
                                  std::to_string(cfg.min_separation) + " within retry budget");
        }
    }

    const double clearance = cfg.body_radius.hi + cfg.process_length.hi + cfg.nucleus_radius.hi + 8.0;
    const double nmargin = cfg.nucleus_radius.hi + 4.0;
    for (int i = 0; i < cfg.distractor_nuclei - cfg.distractors_on_processes; ++i) {
        bool placed = false;
        while (!placed && budget-- > 0) {
            const PointD c{rng.uniform(nmargin, cfg.width - 1 - nmargin),
                           rng.uniform(nmargin, cfg.height - 1 - nmargin)};
            const bool clear =
                std::all_of(out.cells.begin(), out.cells.end(),
                            [&](const SynthCell& s) { return distance(c, s.center) >= clearance; }) &&
                std::all_of(out.distractors.begin(), out.distractors.end(),
                            [&](const PointD& d) { return distance(c, d) >= cfg.min_separation; });
            if (clear) {
                out.distractors.push_back(c);
                placed = true;
            }
        }
        if (!placed) {
            throw InvalidArgument("synthetic: cannot place distractor nuclei clear of cells "
                                  "within retry budget");
        }
    }
    return out;
}

SynthSample render(const SynthConfig& cfg, std::string image_id, bool with_noise) {
    cfg.validate();
    Random rng(cfg.seed);
    Placement placement = place(cfg, rng);

    Canvas green(cfg.width, cfg.height);
    Canvas white(cfg.width, cfg.height);
    // Owner of each process pixel (cell index + 1), to detect crossing strokes.
    Grid<std::int32_t> owner(cfg.width, cfg.height, 0);
    std::vector<std::vector<bool>> touching(placement.cells.size(),
                                            std::vector<bool>(placement.cells.size(), false));

    // Stroke points far enough from every body to host a distractor nucleus.
    std::vector<PointD> hosts;
    const double margin = cfg.nucleus_radius.hi + 4.0;
    const double host_clearance = 0.5 * cfg.body_edge_width + cfg.nucleus_radius.hi + 2.0;
    auto host_ok = [&](const PointD& p) {
        return std::all_of(placement.cells.begin(), placement.cells.end(), [&](const SynthCell& c) {
            return distance(p, c.center) >= c.body_radius + host_clearance;
        }) && p.x >= margin && p.y >= margin && p.x <= cfg.width - 1 - margin &&
               p.y <= cfg.height - 1 - margin;
    };

    auto draw_stroke = [&](const Stroke& s, int cell, double amplitude) {
        const std::size_t n = s.path.size();
        for (std::size_t k = 0; k < n; ++k) {
            const double taper = 1.0 - 0.4 * static_cast<double>(k) / static_cast<double>(n);
            green.dab(s.path[k], s.half_width, amplitude * taper, [&](std::size_t p) {
                const std::int32_t o = owner[p];
                if (o == 0) {
                    owner[p] = cell + 1;
                } else if (o != cell + 1) {
                    touching[static_cast<std::size_t>(o - 1)][static_cast<std::size_t>(cell)] = true;
                    touching[static_cast<std::size_t>(cell)][static_cast<std::size_t>(o - 1)] = true;
                }
            });
        }
    };

    for (std::size_t i = 0; i < placement.cells.size(); ++i) {
        const SynthCell& c = placement.cells[i];
        green.disk(c.center, c.body_radius, c.body_amplitude, cfg.body_edge_width);
        const double process_amp = cfg.process_amplitude * c.body_amplitude;
        const int count = rng.uniform_int(cfg.process_count);
        for (int k = 0; k < count; ++k) {
            const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const PointD start{c.center.x + (c.body_radius - 1.0) * std::cos(heading),
                               c.center.y + (c.body_radius - 1.0) * std::sin(heading)};
            const double hw = rng.uniform() < 0.5 ? 1.0 : 1.5;
            const Stroke stroke =
                random_walk(rng, start, heading, rng.uniform(cfg.process_length), 0.2, hw);
            draw_stroke(stroke, static_cast<int>(i), process_amp);
            if (cfg.distractors_on_processes > 0) {
                std::copy_if(stroke.path.begin(), stroke.path.end(), std::back_inserter(hosts), host_ok);
            }
        }
        if (c.partner >= 0) {
            // Bridge toward the partner: crosses the gap and enters its body.
            const SynthCell& p = placement.cells[static_cast<std::size_t>(c.partner)];
            const double heading = std::atan2(p.center.y - c.center.y, p.center.x - c.center.x);
            const double gap = distance(c.center, p.center) - c.body_radius - p.body_radius;
            const PointD start{c.center.x + (c.body_radius - 1.0) * std::cos(heading),
                               c.center.y + (c.body_radius - 1.0) * std::sin(heading)};
            draw_stroke(random_walk(rng, start, heading, gap + 6.0, 0.03, 1.5),
                        static_cast<int>(i), process_amp);
        }
        white.disk(c.center, c.nucleus_radius, c.nucleus_amplitude);
    }
    for (int i = 0; i < cfg.distractors_on_processes; ++i) {
        const double spacing = 2.0 * cfg.nucleus_radius.hi + 4.0;
        std::erase_if(hosts, [&](const PointD& h) {
            return std::any_of(placement.distractors.begin(), placement.distractors.end(),
                               [&](const PointD& d) { return distance(h, d) < spacing; });
        });
        if (hosts.empty()) {
            throw InvalidArgument("synthetic: no process stroke clear of all bodies to host a "
                                  "distractor nucleus");
        }
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(hosts.size()));
        placement.distractors.push_back(hosts[std::min(pick, hosts.size() - 1)]);
    }
    for (const PointD& d : placement.distractors) {
        white.disk(d, rng.uniform(cfg.nucleus_radius), cfg.nucleus_amplitude);
    }

    SynthSample sample;
    for (std::size_t i = 0; i < touching.size(); ++i) {
        for (std::size_t j = i + 1; j < touching.size(); ++j) {
            if (touching[i][j]) {
                ++sample.overlapping_process_pairs;
            }
        }
    }

    auto finish = [&](const Canvas& canvas) {
        std::vector<double> px(canvas.layer().data());
        for (double& v : px) {
            v += cfg.background_level;
            if (with_noise && cfg.noise_sigma > 0.0) {
                v += cfg.noise_sigma * rng.normal();
            }
            v = std::clamp(v, 0.0, 1.0);
        }
        return IntensityImage(cfg.width, cfg.height, std::move(px));
    };
    sample.green = finish(green);
    sample.white = finish(white);
    sample.truth.image_id = std::move(image_id);
    for (const SynthCell& c : placement.cells) {
        sample.truth.cells.push_back({c.center, std::nullopt});
    }
    sample.cells = std::move(placement.cells);
    sample.distractors = std::move(placement.distractors);
    return sample;
}

}  // namespace

void SynthConfig::validate() const {
    auto ordered = [](const RangeD& r) { return r.lo <= r.hi; };
    if (width <= 0 || height <= 0) {
        throw InvalidArgument("synthetic: image size must be positive");
    }
    if (cell_count < 0 || distractor_nuclei < 0 || close_pairs < 0 || 2 * close_pairs > cell_count ||
        distractors_on_processes < 0 || distractors_on_processes > distractor_nuclei) {
        throw InvalidArgument("synthetic: counts must be >= 0, close pairs <= cell_count / 2 and "
                              "distractors on processes <= distractor nuclei");
    }
    if (!ordered(nucleus_radius) || !ordered(body_radius) || !ordered(process_length) ||
        !ordered(body_amplitude) || !ordered(close_pair_gap) || process_count.lo > process_count.hi) {
        throw InvalidArgument("synthetic: range with lo > hi");
    }
    if (!(nucleus_radius.lo > 0.0) || !(nucleus_radius.hi < body_radius.lo)) {
        throw InvalidArgument("synthetic: nucleus radius range must lie below body radius range");
    }
    if (process_count.lo < 0 || process_length.lo < 0.0 || min_separation < 0.0 ||
        noise_sigma < 0.0 || min_body_gap < 0.0 || !(body_edge_width > 0.0)) {
        throw InvalidArgument("synthetic: negative size or count");
    }
    if (!(background_level >= 0.0 && background_level < 1.0)) {
        throw InvalidArgument("synthetic: background level must be in [0,1)");
    }
}

SynthSample generate(const SynthConfig& config, std::string image_id) {
    return render(config, std::move(image_id), true);
}

SynthSample generate_noiseless(SynthConfig config, std::string image_id) {
    return render(config, std::move(image_id), false);
}

std::optional<SuiteKind> parse_suite(std::string_view name) noexcept {
    if (name == "easy") return SuiteKind::Easy;
    if (name == "hard") return SuiteKind::Hard;
    return std::nullopt;
}

std::string_view to_string(SuiteKind kind) noexcept {
    return kind == SuiteKind::Easy ? "easy" : "hard";
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::vector<SynthConfig> suite_configs(SuiteKind kind, std::uint64_t seed) {
    SynthConfig base;
    if (kind == SuiteKind::Easy) {
        base.cell_count = 20;
        base.min_separation = 80.0;
        base.noise_sigma = 0.02;
    } else {
        base.cell_count = 20;
        base.close_pairs = 4;
        base.distractor_nuclei = 8;
        base.min_separation = 30.0;
        base.noise_sigma = 0.05;
        base.distractors_on_processes = 4;
        base.process_count = {4, 6};
        base.process_length = {20.0, 45.0};
        base.low_contrast_fraction = 0.2;
    }
    std::vector<SynthConfig> out(kSuiteSize, base);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].seed = splitmix64(seed + i);
    }
    return out;
}

std::string suite_image_id(SuiteKind kind, std::size_t index) {
    std::ostringstream id;
    id << to_string(kind) << '_' << std::setw(3) << std::setfill('0') << index;
    return id.str();
}

std::vector<SynthSample> generate_suite(SuiteKind kind, std::uint64_t seed) {
    const auto configs = suite_configs(kind, seed);
    std::vector<SynthSample> samples;
    samples.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        samples.push_back(generate(configs[i], suite_image_id(kind, i)));
    }
    return samples;
}

std::vector<ManifestEntry> write_suite(const std::filesystem::path& dir, SuiteKind kind,
                                       std::uint64_t seed, std::size_t limit) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string());
    }
    const auto configs = suite_configs(kind, seed);
    const std::size_t n = limit == 0 ? configs.size() : std::min(limit, configs.size());
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = suite_image_id(kind, i);
        const SynthSample s = generate(configs[i], id);
        ManifestEntry e{id, id + "_green.png", id + "_white.png", id + "_truth.csv"};
        save_intensity_png(dir / e.green_path, s.green, 16);
        save_intensity_png(dir / e.white_path, s.white, 16);
        write_text_file(dir / e.truth_path, ground_truth_csv(s.truth));
        entries.push_back(std::move(e));
    }
    write_text_file(dir / "manifest.csv", manifest_csv(entries));
    return entries;
}

}  // namespace oslo
