#include "raqsim/pgm.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace raqsim {

namespace {

// Next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

int next_int(std::istream& in, const std::string& what) {
    const std::string tok = next_token(in);
    if (tok.empty()) throw std::runtime_error("truncated PGM header: missing " + what);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw std::runtime_error("bad PGM " + what + ": '" + tok + "'");
    }
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);

    const std::string magic = next_token(f);
    if (magic != "P2" && magic != "P5")
        throw std::runtime_error(path + ": not a PGM file (magic '" + magic + "')");

    const int width = next_int(f, "width");
    const int height = next_int(f, "height");
    const int maxval = next_int(f, "maxval");
    if (width < 1 || height < 1) throw std::runtime_error(path + ": bad PGM dimensions");
    if (maxval < 1 || maxval > 255)
        throw std::runtime_error(path + ": unsupported maxval " + std::to_string(maxval));

    GrayImage img(height, width, maxval + 1);
    const size_t n = img.pixels.size();
    if (magic == "P2") {
        for (size_t i = 0; i < n; ++i) {
            const int v = next_int(f, "pixel");
            if (v < 0 || v > maxval) throw std::runtime_error(path + ": pixel out of range");
            img.pixels[i] = v;
        }
    } else {
        // single whitespace byte after maxval, then raw bytes
        std::string raw(n, '\0');
        f.read(raw.data(), static_cast<std::streamsize>(n));
        if (f.gcount() != static_cast<std::streamsize>(n))
            throw std::runtime_error(path + ": truncated raw PGM data");
        for (size_t i = 0; i < n; ++i) {
            const int v = static_cast<unsigned char>(raw[i]);
            if (v > maxval) throw std::runtime_error(path + ": pixel out of range");
            img.pixels[i] = v;
        }
    }
    return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
    if (img.levels < 2 || img.levels > 256)
        throw std::invalid_argument("PGM output requires 2..256 gray levels");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "P5\n" << img.width << " " << img.height << "\n" << (img.levels - 1) << "\n";
    std::string raw(img.pixels.size(), '\0');
    for (size_t i = 0; i < img.pixels.size(); ++i)
        raw[i] = static_cast<char>(static_cast<unsigned char>(img.pixels[i]));
    f.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace raqsim
