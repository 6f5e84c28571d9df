#include "lowrank/pgm.hpp"

#include "lowrank/numeric_text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace lowrank {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Header tokenizer: whitespace-separated tokens, '#' starts a comment that
// runs to end of line.
struct HeaderScanner {
    const std::string& data;
    std::size_t pos = 0;
    const std::string& name;

    void skip_filler() {
        while (pos < data.size()) {
            if (is_space(data[pos])) {
                ++pos;
            } else if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    }

    std::string next_token(const char* what) {
        skip_filler();
        std::size_t start = pos;
        while (pos < data.size() && !is_space(data[pos]) && data[pos] != '#')
            ++pos;
        if (pos == start)
            throw InputError(name + ": truncated header, missing " + what);
        return data.substr(start, pos - start);
    }

    long next_int(const char* what, long min, long max) {
        std::string token = next_token(what);
        long v = 0;
        try {
            v = static_cast<long>(parse_int(token, what));
        } catch (const InputError&) {
            throw InputError(name + ": " + what + " is not a number: '" + token + "'");
        }
        if (v < min || v > max)
            throw InputError(name + ": " + what + " " + token + " outside [" +
                             std::to_string(min) + ", " + std::to_string(max) + "]");
        return v;
    }
};

} // namespace

Matrix read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open image file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string data = buffer.str();

    HeaderScanner scan{data, 0, path};
    std::string magic = scan.next_token("magic");
    if (magic != "P2" && magic != "P5")
        throw InputError(path + ": unsupported magic '" + magic + "' (expected P2 or P5)");

    long width = scan.next_int("width", 1, 1 << 20);
    long height = scan.next_int("height", 1, 1 << 20);
    long maxval = scan.next_int("maxval", 1, 65535);

    Matrix img(height, width);
    if (magic == "P2") {
        for (long i = 0; i < height; ++i)
            for (long j = 0; j < width; ++j) {
                long v = scan.next_int("pixel value", 0, maxval);
                img(i, j) = static_cast<double>(v);
            }
        scan.skip_filler();
        if (scan.pos != data.size())
            throw InputError(path + ": trailing data after pixel values");
    } else {
        if (maxval > 255)
            throw InputError(path + ": binary maxval " + std::to_string(maxval) +
                             " exceeds 255 (16-bit raster not supported)");
        // Exactly one whitespace byte separates the header from the raster.
        if (scan.pos >= data.size() || !is_space(data[scan.pos]))
            throw InputError(path + ": missing whitespace before binary raster");
        std::size_t raster = scan.pos + 1;
        std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
        if (data.size() - raster < need)
            throw InputError(path + ": raster truncated, expected " + std::to_string(need) +
                             " bytes, got " + std::to_string(data.size() - raster));
        if (data.size() - raster > need)
            throw InputError(path + ": trailing data after raster");
        for (long i = 0; i < height; ++i)
            for (long j = 0; j < width; ++j) {
                unsigned char byte = static_cast<unsigned char>(
                    data[raster + static_cast<std::size_t>(i) * width + j]);
                if (byte > maxval)
                    throw InputError(path + ": pixel value " + std::to_string(int(byte)) +
                                     " exceeds maxval " + std::to_string(maxval));
                img(i, j) = static_cast<double>(byte);
            }
    }
    return img;
}

void write_pgm(const std::string& path, const Matrix& image) {
    if (image.rows() < 1 || image.cols() < 1)
        throw InputError("write_pgm: image must have at least one pixel");
    require_finite(image, "write_pgm");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    out << "P5\n" << format_int(image.cols()) << ' ' << format_int(image.rows()) << "\n255\n";
    std::vector<char> raster;
    raster.reserve(static_cast<std::size_t>(image.size()));
    for (Index i = 0; i < image.rows(); ++i)
        for (Index j = 0; j < image.cols(); ++j) {
            double v = std::round(image(i, j));
            v = std::clamp(v, 0.0, 255.0);
            raster.push_back(static_cast<char>(static_cast<unsigned char>(v)));
        }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
    if (!out)
        throw InputError("failed writing image to '" + path + "'");
}

} // namespace lowrank
