#include "primeifs/raster.hpp"

#include "primeifs/error.hpp"
#include "primeifs/workers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

namespace primeifs {

namespace {

std::size_t cell_index(double v, std::size_t size)
{
    const auto i = static_cast<std::size_t>(std::floor(v * static_cast<double>(size)));
    return std::min(i, size - 1);
}

} // namespace

DensityGrid::DensityGrid(std::size_t size)
{
    if (size < 2)
        throw InvalidQueryError("grid size must be >= 2");
    counts_ = CountMatrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
}

void DensityGrid::add(const Point2d& p)
{
    const double x = p.x();
    const double y = p.y();
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw OutOfUnitSquareError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                                   ") outside the unit square");
    const std::size_t n = width();
    const std::size_t col = cell_index(x, n);
    const std::size_t row = n - 1 - cell_index(y, n);
    ++counts_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    ++points_total_;
}

DensityGrid& DensityGrid::operator+=(const DensityGrid& other)
{
    if (other.width() != width())
        throw InvalidQueryError("grid sizes differ");
    counts_ += other.counts_;
    points_total_ += other.points_total_;
    return *this;
}

DensityGrid accumulate(std::span<const Point2d> points, std::size_t size, std::size_t workers)
{
    if (workers == 0)
        workers = default_workers();
    workers = std::max<std::size_t>(1, std::min(workers, points.size() / 65536 + 1));
    if (workers == 1) {
        DensityGrid g(size);
        for (const auto& p : points)
            g.add(p);
        return g;
    }
    std::vector<DensityGrid> shards(workers, DensityGrid(size));
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    const std::size_t begin = points.size() * w / workers;
                    const std::size_t end = points.size() * (w + 1) / workers;
                    for (std::size_t i = begin; i < end; ++i)
                        shards[w].add(points[i]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    for (std::size_t w = 1; w < workers; ++w)
        shards[0] += shards[w];
    return std::move(shards[0]);
}

GrayMatrix render(const DensityGrid& grid, IntensityScale scale)
{
    const auto& c = grid.counts();
    GrayMatrix img = GrayMatrix::Constant(c.rows(), c.cols(), 255);
    const std::uint64_t cmax = grid.points_total() == 0 ? 0 : c.maxCoeff();
    if (cmax == 0)
        return img;
    const double denom = scale == IntensityScale::Linear ? static_cast<double>(cmax)
                                                         : std::log1p(static_cast<double>(cmax));
    for (Eigen::Index r = 0; r < c.rows(); ++r)
        for (Eigen::Index k = 0; k < c.cols(); ++k) {
            const double v = static_cast<double>(c(r, k));
            const double level = scale == IntensityScale::Linear ? v / denom : std::log1p(v) / denom;
            img(r, k) = static_cast<std::uint8_t>(255 - std::lround(255.0 * level));
        }
    return img;
}

void burn_gridlines(GrayMatrix& image, std::size_t divider)
{
    if (divider < 2)
        return;
    const auto n = static_cast<std::size_t>(image.cols());
    for (std::size_t k = 1; k < divider; ++k) {
        const std::size_t at = std::min(n - 1, (k * n) / divider);
        image.col(static_cast<Eigen::Index>(at)).setConstant(128);
        image.row(static_cast<Eigen::Index>(n - 1 - at)).setConstant(128);
    }
}

std::string encode_pgm(const GrayMatrix& image)
{
    std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) +
                      "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + static_cast<std::size_t>(image.size()));
    // Row-major storage matches PGM scanline order.
    std::copy(image.data(), image.data() + image.size(), out.begin() + static_cast<long>(header));
    return out;
}

std::string write_points_csv(std::span<const Point2d> points)
{
    std::string out;
    out.reserve(points.size() * 40);
    char buf[64];
    for (const auto& p : points) {
        auto r = std::to_chars(buf, buf + sizeof buf, p.x(), std::chars_format::general, 17);
        out.append(buf, r.ptr);
        out.push_back(',');
        r = std::to_chars(buf, buf + sizeof buf, p.y(), std::chars_format::general, 17);
        out.append(buf, r.ptr);
        out.push_back('\n');
    }
    return out;
}

std::vector<Point2d> parse_points_csv(const std::string& text)
{
    std::vector<Point2d> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidQueryError("malformed CSV line \"" + line + "\"");
        double x = 0, y = 0;
        const char* b = line.data();
        auto rx = std::from_chars(b, b + comma, x);
        auto ry = std::from_chars(b + comma + 1, b + line.size(), y);
        if (rx.ec != std::errc{} || ry.ec != std::errc{} || ry.ptr != b + line.size())
            throw InvalidQueryError("malformed CSV line \"" + line + "\"");
        out.emplace_back(x, y);
    }
    return out;
}

} // namespace primeifs
