#ifndef PRIMEIFS_RASTER_HPP
#define PRIMEIFS_RASTER_HPP

#include "primeifs/ifs_engine.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace primeifs {

using CountMatrix = Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using GrayMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Square density grid; row 0 is the top of the image (y = 1).
class DensityGrid {
public:
    explicit DensityGrid(std::size_t size);

    std::size_t width() const noexcept { return static_cast<std::size_t>(counts_.cols()); }
    std::size_t height() const noexcept { return static_cast<std::size_t>(counts_.rows()); }
    std::uint64_t points_total() const noexcept { return points_total_; }
    const CountMatrix& counts() const noexcept { return counts_; }

    std::uint64_t at(std::size_t row, std::size_t col) const { return counts_(row, col); }

    void add(const Point2d& p);
    DensityGrid& operator+=(const DensityGrid& other);

private:
    CountMatrix counts_;
    std::uint64_t points_total_ = 0;
};

enum class IntensityScale { Linear, Log };

// Sharded over `workers`; the result is the same for any shard count.
DensityGrid accumulate(std::span<const Point2d> points, std::size_t size, std::size_t workers = 0);

// 255 - round(255 v), v = c / c_max (Linear) or ln(1 + c) / ln(1 + c_max) (Log).
GrayMatrix render(const DensityGrid& grid, IntensityScale scale);

// 1-pixel mid-gray lines at multiples of size / divider (interior only).
void burn_gridlines(GrayMatrix& image, std::size_t divider);

// Binary P5, maxval 255.
std::string encode_pgm(const GrayMatrix& image);

inline std::string render_pgm(const DensityGrid& grid, IntensityScale scale)
{
    return encode_pgm(render(grid, scale));
}

// One "x,y" line per point, 17 significant digits.
std::string write_points_csv(std::span<const Point2d> points);
std::vector<Point2d> parse_points_csv(const std::string& text);

} // namespace primeifs

#endif // PRIMEIFS_RASTER_HPP
