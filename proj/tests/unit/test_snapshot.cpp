#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>

#include "tlao/snapshot.hpp"

using namespace tlao;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("one-dimensional round trip") {
    const std::array<Grid1D, 1> axes{Grid1D{-4.0, 4.0, 16}};
    std::vector<std::complex<double>> v(16);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {double(i), -0.5 * double(i)};
    const auto path = scratch("tlao_snap_1d.bin");
    write_snapshot(path, axes, 12.5, v);
    CHECK(fs::file_size(path) == 8 + 4 + 4 + 24 + 8 + 16 * 16);
    const auto s = read_snapshot(path);
    REQUIRE(s.axes.size() == 1);
    CHECK(s.axes[0].n == 16);
    CHECK(s.axes[0].x_min == -4.0);
    CHECK(s.axes[0].x_max == 4.0);
    CHECK(s.time == 12.5);
    CHECK(s.values == v);
    fs::remove(path);
}

TEST_CASE("two-dimensional round trip") {
    const std::array<Grid1D, 2> axes{Grid1D{0.0, 1.0, 4}, Grid1D{-1.0, 1.0, 8}};
    std::vector<std::complex<double>> v(32, {1.0, 2.0});
    v[9] = {3.0, 4.0};
    const auto path = scratch("tlao_snap_2d.bin");
    write_snapshot(path, axes, 0.0, v);
    const auto s = read_snapshot(path);
    REQUIRE(s.axes.size() == 2);
    CHECK(s.axes[1].n == 8);
    CHECK(s.values[9] == std::complex<double>(3.0, 4.0));
    fs::remove(path);
}

TEST_CASE("malformed snapshots") {
    const std::array<Grid1D, 1> axes{Grid1D{0.0, 1.0, 4}};
    std::vector<std::complex<double>> v(3);
    CHECK_THROWS(write_snapshot(scratch("tlao_snap_bad.bin"), axes, 0.0, v));
    const auto path = scratch("tlao_snap_magic.bin");
    std::ofstream(path, std::ios::binary) << "NOTASNAPSHOT";
    CHECK_THROWS(read_snapshot(path));
    fs::remove(path);
    CHECK_THROWS(read_snapshot(scratch("tlao_snap_missing.bin")));
}
