#include "oslo/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "oslo/error.hpp"

namespace oslo {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidArgument("config: bad value for " + std::string(key) + ": '" +
                              std::string(text) + "'");
    }
    return value;
}

}  // namespace

void PipelineConfig::validate() const {
    if (blur_radius < 0 || blur_radius > 30) {
        throw InvalidArgument("blur_radius must be in [0, 30]");
    }
    canny.validate();
    if (level_grid < 2) {
        throw InvalidArgument("level_grid must be >= 2");
    }
    if (lambda_grid < 2) {
        throw InvalidArgument("lambda_grid must be >= 2");
    }
    if (!(match_radius > 0.0)) {
        throw InvalidArgument("match_radius must be positive");
    }
    if (fixed_lambda && !(*fixed_lambda >= 0.0 && *fixed_lambda <= 1.0)) {
        throw InvalidArgument("lambda must be in [0,1]");
    }
    if (bradley_window != 0 && (bradley_window < 3 || bradley_window % 2 == 0)) {
        throw InvalidArgument("bradley_window must be 0 or odd >= 3");
    }
    if (!(bradley_sensitivity >= 0.0 && bradley_sensitivity <= 1.0)) {
        throw InvalidArgument("bradley_sensitivity must be in [0,1]");
    }
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
    if (key == "blur_radius") {
        blur_radius = parse_number<int>(key, value);
    } else if (key == "canny_blur_radius") {
        canny.blur_radius = parse_number<int>(key, value);
    } else if (key == "canny_low") {
        canny.low_ratio = parse_number<double>(key, value);
    } else if (key == "canny_high") {
        canny.high_ratio = parse_number<double>(key, value);
    } else if (key == "level_grid") {
        level_grid = parse_number<std::size_t>(key, value);
    } else if (key == "lambda_grid") {
        lambda_grid = parse_number<std::size_t>(key, value);
    } else if (key == "min_area") {
        min_area = parse_number<std::size_t>(key, value);
    } else if (key == "surface") {
        if (value == "distance") {
            surface = SurfaceMode::Distance;
        } else if (value == "gradient") {
            surface = SurfaceMode::Gradient;
        } else {
            throw InvalidArgument("config: surface must be distance or gradient");
        }
    } else if (key == "match_radius") {
        match_radius = parse_number<double>(key, value);
    } else if (key == "lambda") {
        if (value == "auto" || value.empty()) {
            fixed_lambda.reset();
        } else {
            fixed_lambda = parse_number<double>(key, value);
        }
    } else if (key == "bradley_window") {
        bradley_window = parse_number<int>(key, value);
    } else if (key == "bradley_sensitivity") {
        bradley_sensitivity = parse_number<double>(key, value);
    } else {
        throw InvalidArgument("config: unknown key '" + std::string(key) + "'");
    }
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig config;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    config.validate();
    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read config " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const PipelineConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "blur_radius = " << c.blur_radius << '\n'
        << "canny_blur_radius = " << c.canny.blur_radius << '\n'
        << "canny_low = " << c.canny.low_ratio << '\n'
        << "canny_high = " << c.canny.high_ratio << '\n'
        << "level_grid = " << c.level_grid << '\n'
        << "lambda_grid = " << c.lambda_grid << '\n'
        << "min_area = " << c.min_area << '\n'
        << "surface = " << to_string(c.surface) << '\n'
        << "match_radius = " << c.match_radius << '\n'
        << "lambda = ";
    if (c.fixed_lambda) {
        out << *c.fixed_lambda;
    } else {
        out << "auto";
    }
    out << '\n'
        << "bradley_window = " << c.bradley_window << '\n'
        << "bradley_sensitivity = " << c.bradley_sensitivity << '\n';
    return out.str();
}

std::string_view to_string(SurfaceMode mode) noexcept {
    return mode == SurfaceMode::Distance ? "distance" : "gradient";
}

}  // namespace oslo
