#include "kolmo/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace kolmo {

namespace {

constexpr std::array<char, 12> kMagic = {'K', 'O', 'L', 'M', 'O', '-',
                                         'C', 'K', 'P', 'T', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
void put_f64(std::vector<unsigned char>& buf, double v) {
    put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}
std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}
double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace

void write_checkpoint(const std::string& path, const SpectralVectorField& field, double t) {
    const GridSpec& g = field.grid();
    const int n = g.n();
    std::vector<unsigned char> buf;
    buf.reserve(32 + field.size() * 3 * 16);
    buf.insert(buf.end(), kMagic.begin(), kMagic.end());
    put_u32(buf, kVersion);
    put_u64(buf, static_cast<std::uint64_t>(n));
    put_f64(buf, g.L());
    put_f64(buf, t);
    for (int c = 0; c < 3; ++c) {
        for (int mx = -n / 2; mx < n / 2; ++mx) {
            const int ix = mx < 0 ? mx + n : mx;
            for (int my = -n / 2; my < n / 2; ++my) {
                const int iy = my < 0 ? my + n : my;
                for (int mz = -n / 2; mz < n / 2; ++mz) {
                    const int iz = mz < 0 ? mz + n : mz;
                    const std::size_t idx = (static_cast<std::size_t>(ix) * n + iy) * n + iz;
                    const Complex z = field.at(c, idx);
                    put_f64(buf, z.real());
                    put_f64(buf, z.imag());
                }
            }
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_checkpoint: cannot open " + path);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write_checkpoint: write failed for " + path);
}

std::pair<SpectralVectorField, double> read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_checkpoint: cannot open " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 40) throw std::runtime_error("read_checkpoint: truncated file " + path);
    if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0)
        throw std::runtime_error("read_checkpoint: bad magic in " + path);
    if (get_u32(buf.data() + 12) != kVersion)
        throw std::runtime_error("read_checkpoint: unsupported version in " + path);
    const auto n64 = get_u64(buf.data() + 16);
    const double L = get_f64(buf.data() + 24);
    const double t = get_f64(buf.data() + 32);
    const int n = static_cast<int>(n64);
    const std::size_t expected = 40 + static_cast<std::size_t>(3) * n * n * n * 16;
    if (buf.size() != expected)
        throw std::runtime_error("read_checkpoint: size mismatch in " + path);

    GridSpec grid(L, n);
    SpectralVectorField field(grid);
    const unsigned char* p = buf.data() + 40;
    for (int c = 0; c < 3; ++c) {
        for (int mx = -n / 2; mx < n / 2; ++mx) {
            const int ix = mx < 0 ? mx + n : mx;
            for (int my = -n / 2; my < n / 2; ++my) {
                const int iy = my < 0 ? my + n : my;
                for (int mz = -n / 2; mz < n / 2; ++mz) {
                    const int iz = mz < 0 ? mz + n : mz;
                    const std::size_t idx = (static_cast<std::size_t>(ix) * n + iy) * n + iz;
                    const double re = get_f64(p);
                    const double im = get_f64(p + 8);
                    p += 16;
                    field.at(c, idx) = Complex(re, im);
                }
            }
        }
    }
    return {std::move(field), t};
}

}  // namespace kolmo
