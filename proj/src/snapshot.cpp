#include "tlao/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tlao {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'T', 'L', 'A', 'O', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("snapshot: truncated file");
    return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, std::span<const Grid1D> axes, double time,
                    std::span<const std::complex<double>> values) {
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.n;
    if (total != values.size()) throw std::invalid_argument("snapshot: value count does not match axes");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("snapshot: cannot open " + path.string());
    os.write(kMagic, sizeof(kMagic));
    put(os, kVersion);
    put(os, static_cast<std::uint32_t>(axes.size()));
    for (const auto& a : axes) {
        put(os, static_cast<std::uint64_t>(a.n));
        put(os, a.x_min);
        put(os, a.x_max);
    }
    put(os, time);
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw std::runtime_error("snapshot: bad magic");
    if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("snapshot: unsupported version");
    const auto dims = get<std::uint32_t>(is);
    Snapshot snap;
    std::size_t total = 1;
    for (std::uint32_t d = 0; d < dims; ++d) {
        Grid1D g;
        g.n = get<std::uint64_t>(is);
        g.x_min = get<double>(is);
        g.x_max = get<double>(is);
        total *= g.n;
        snap.axes.push_back(g);
    }
    snap.time = get<double>(is);
    snap.values.resize(total);
    is.read(reinterpret_cast<char*>(snap.values.data()),
            static_cast<std::streamsize>(total * sizeof(std::complex<double>)));
    if (!is) throw std::runtime_error("snapshot: truncated data");
    return snap;
}

}  // namespace tlao
