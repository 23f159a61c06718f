#include "oslo/image_io.hpp"

#include <png.h>
#include <tiffio.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace oslo {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f != nullptr) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

fs::path temp_sibling(const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    return tmp;
}

void commit(const fs::path& tmp, const fs::path& path) {
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

// Decoded raster before conversion to the public image types.
struct RawRaster {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 or 3
    double full_scale = 255.0;
    std::vector<std::uint16_t> samples;  // interleaved
};

[[noreturn]] void png_error_handler(png_structp png, png_const_charp msg) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    if (text != nullptr) {
        *text = msg;
    }
    png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

RawRaster read_png(const fs::path& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) {
        throw IoError("cannot open " + path.string());
    }
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw IoError("not a PNG file: " + path.string());
    }

    std::string error_text;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_text,
                                             png_error_handler, png_warning_handler);
    if (png == nullptr) {
        throw IoError("libpng initialization failed");
    }
    png_infop info = png_create_info_struct(png);
    RawRaster raster;
    std::vector<png_bytep> rows;
    std::vector<png_byte> buffer;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed for " + path.string() + ": " + error_text);
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
        bit_depth = 8;
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
        bit_depth = 8;
    }
    if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) {
        png_set_strip_alpha(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = buffer.data() + y * rowbytes;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    raster.width = static_cast<int>(width);
    raster.height = static_cast<int>(height);
    raster.channels = channels;
    raster.full_scale = bit_depth == 16 ? 65535.0 : 255.0;
    const std::size_t n = static_cast<std::size_t>(width) * height * channels;
    raster.samples.resize(n);
    if (bit_depth == 16) {
        for (std::size_t i = 0; i < n; ++i) {
            raster.samples[i] =
                static_cast<std::uint16_t>((buffer[2 * i] << 8) | buffer[2 * i + 1]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            raster.samples[i] = buffer[i];
        }
    }
    return raster;
}

struct TiffCloser {
    void operator()(TIFF* t) const noexcept {
        if (t != nullptr) {
            TIFFClose(t);
        }
    }
};

RawRaster read_tiff(const fs::path& path) {
    TIFFSetWarningHandler(nullptr);
    std::unique_ptr<TIFF, TiffCloser> tif(TIFFOpen(path.c_str(), "r"));
    if (!tif) {
        throw IoError("cannot open TIFF " + path.string());
    }
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint16_t bits = 0;
    std::uint16_t spp = 1;
    std::uint16_t photometric = PHOTOMETRIC_MINISBLACK;
    std::uint16_t sample_format = SAMPLEFORMAT_UINT;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &width);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &height);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bits);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PHOTOMETRIC, &photometric);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLEFORMAT, &sample_format);

    if (spp != 1 || (bits != 8 && bits != 16) || sample_format != SAMPLEFORMAT_UINT ||
        (photometric != PHOTOMETRIC_MINISBLACK && photometric != PHOTOMETRIC_MINISWHITE)) {
        throw IoError("unsupported TIFF layout (need 8/16-bit single-plane gray): " +
                      path.string());
    }

    RawRaster raster;
    raster.width = static_cast<int>(width);
    raster.height = static_cast<int>(height);
    raster.channels = 1;
    raster.full_scale = bits == 16 ? 65535.0 : 255.0;
    raster.samples.resize(static_cast<std::size_t>(width) * height);

    std::vector<unsigned char> line(static_cast<std::size_t>(TIFFScanlineSize(tif.get())));
    for (std::uint32_t y = 0; y < height; ++y) {
        if (TIFFReadScanline(tif.get(), line.data(), y, 0) < 0) {
            throw IoError("TIFF scanline read failed: " + path.string());
        }
        for (std::uint32_t x = 0; x < width; ++x) {
            std::uint16_t v = 0;
            if (bits == 16) {
                std::uint16_t s = 0;
                std::memcpy(&s, line.data() + 2 * x, 2);
                v = s;
            } else {
                v = line[x];
            }
            if (photometric == PHOTOMETRIC_MINISWHITE) {
                v = static_cast<std::uint16_t>(raster.full_scale - v);
            }
            raster.samples[static_cast<std::size_t>(y) * width + x] = v;
        }
    }
    return raster;
}

RawRaster read_raster(const fs::path& path) {
    if (!fs::exists(path)) {
        throw IoError("file not found: " + path.string());
    }
    const std::string ext = lower_extension(path);
    RawRaster raster;
    if (ext == ".png") {
        raster = read_png(path);
    } else if (ext == ".tif" || ext == ".tiff") {
        raster = read_tiff(path);
    } else {
        throw IoError("unsupported image format: " + path.string());
    }
    if (raster.width == 0 || raster.height == 0) {
        throw IoError("zero-area image: " + path.string());
    }
    return raster;
}

void write_png(const fs::path& path, int width, int height, int color_type, int bit_depth,
               const std::vector<png_byte>& buffer) {
    const fs::path tmp = temp_sibling(path);
    {
        FilePtr file(std::fopen(tmp.c_str(), "wb"));
        if (!file) {
            throw IoError("cannot open for writing: " + path.string());
        }
        std::string error_text;
        png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error_text,
                                                  png_error_handler, png_warning_handler);
        if (png == nullptr) {
            throw IoError("libpng initialization failed");
        }
        png_infop info = png_create_info_struct(png);
        const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
        const std::size_t rowbytes =
            static_cast<std::size_t>(width) * channels * (bit_depth / 8);
        std::vector<png_const_bytep> rows(static_cast<std::size_t>(height));
        for (int y = 0; y < height; ++y) {
            rows[static_cast<std::size_t>(y)] = buffer.data() + static_cast<std::size_t>(y) * rowbytes;
        }
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_write_struct(&png, &info);
            throw IoError("PNG encode failed for " + path.string() + ": " + error_text);
        }
        png_init_io(png, file.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                     bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                     PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        png_write_rows(png, const_cast<png_bytepp>(rows.data()), static_cast<png_uint_32>(height));
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    }
    commit(tmp, path);
}

void require_nonempty(int width, int height, const fs::path& path) {
    if (width <= 0 || height <= 0) {
        throw IoError("refusing to write zero-area image: " + path.string());
    }
}

}  // namespace

LoadedImage load_image(const fs::path& path) {
    const RawRaster raster = read_raster(path);
    const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
    if (raster.channels == 1) {
        std::vector<double> px(n);
        for (std::size_t i = 0; i < n; ++i) {
            px[i] = raster.samples[i] / raster.full_scale;
        }
        return IntensityImage(raster.width, raster.height, std::move(px));
    }
    std::vector<Rgb> px(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = Rgb{raster.samples[3 * i] / raster.full_scale,
                    raster.samples[3 * i + 1] / raster.full_scale,
                    raster.samples[3 * i + 2] / raster.full_scale};
    }
    return CombinedImage(raster.width, raster.height, std::move(px));
}

IntensityImage load_channel(const fs::path& path) {
    LoadedImage loaded = load_image(path);
    if (auto* gray = std::get_if<IntensityImage>(&loaded)) {
        return std::move(*gray);
    }
    const auto& color = std::get<CombinedImage>(loaded);
    std::vector<double> px(color.size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        const Rgb& p = color[i];
        px[i] = std::max({p.r, p.g, p.b});
    }
    return IntensityImage(color.width(), color.height(), std::move(px));
}

LabelMap load_label_png(const fs::path& path) {
    const RawRaster raster = read_raster(path);
    if (raster.channels != 1) {
        throw IoError("label mask must be single-channel: " + path.string());
    }
    std::vector<std::int32_t> labels(raster.samples.begin(), raster.samples.end());
    return LabelMap(raster.width, raster.height, std::move(labels));
}

void save_png_gray8(const fs::path& path, const Grid<std::uint8_t>& img) {
    require_nonempty(img.width(), img.height(), path);
    std::vector<png_byte> buffer(img.data().begin(), img.data().end());
    write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 8, buffer);
}

void save_png_gray16(const fs::path& path, const Grid<std::uint16_t>& img) {
    require_nonempty(img.width(), img.height(), path);
    std::vector<png_byte> buffer(img.size() * 2);
    for (std::size_t i = 0; i < img.size(); ++i) {
        buffer[2 * i] = static_cast<png_byte>(img[i] >> 8);
        buffer[2 * i + 1] = static_cast<png_byte>(img[i] & 0xFF);
    }
    write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 16, buffer);
}

void save_png_rgb8(const fs::path& path, const Grid<Rgb>& img) {
    require_nonempty(img.width(), img.height(), path);
    std::vector<png_byte> buffer(img.size() * 3);
    auto q = [](double v) {
        return static_cast<png_byte>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    for (std::size_t i = 0; i < img.size(); ++i) {
        buffer[3 * i] = q(img[i].r);
        buffer[3 * i + 1] = q(img[i].g);
        buffer[3 * i + 2] = q(img[i].b);
    }
    write_png(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, buffer);
}

void save_intensity_png(const fs::path& path, const IntensityImage& img, int bit_depth) {
    if (bit_depth == 8) {
        Grid<std::uint8_t> out(img.width(), img.height());
        for (std::size_t i = 0; i < img.size(); ++i) {
            out[i] = static_cast<std::uint8_t>(std::lround(img[i] * 255.0));
        }
        save_png_gray8(path, out);
    } else if (bit_depth == 16) {
        Grid<std::uint16_t> out(img.width(), img.height());
        for (std::size_t i = 0; i < img.size(); ++i) {
            out[i] = static_cast<std::uint16_t>(std::lround(img[i] * 65535.0));
        }
        save_png_gray16(path, out);
    } else {
        throw InvalidArgument("bit depth must be 8 or 16");
    }
}

void save_label_png16(const fs::path& path, const LabelMap& labels) {
    Grid<std::uint16_t> out(labels.width(), labels.height());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] > 65535) {
            throw InvalidArgument("label does not fit in 16 bits");
        }
        out[i] = static_cast<std::uint16_t>(labels[i]);
    }
    save_png_gray16(path, out);
}

void write_text_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = temp_sibling(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open for writing: " + path.string());
        }
        out << content;
        if (!out) {
            throw IoError("write failed: " + path.string());
        }
    }
    commit(tmp, path);
}

}  // namespace oslo
