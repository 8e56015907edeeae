#ifndef PRIMEIFS_IFS_ENGINE_HPP
#define PRIMEIFS_IFS_ENGINE_HPP

#include "primeifs/error.hpp"
#include "primeifs/residue_mapping.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace primeifs {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point2d = Point2<double>;

template <typename Scalar>
using Linear2 = Eigen::Matrix<Scalar, 2, 2>;

// Generator behind chaos_game; recorded in run manifests.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

// (x, y) -> [r cos(theta)  -s sin(phi); r sin(theta)  s cos(phi)] (x, y) + (e, f)
template <typename Scalar>
struct AffineMap {
    Scalar r{1};
    Scalar s{1};
    Scalar theta{0};
    Scalar phi{0};
    Scalar e{0};
    Scalar f{0};

    Linear2<Scalar> linear() const
    {
        using std::cos;
        using std::sin;
        Linear2<Scalar> m;
        m << r * cos(theta), -s * sin(phi),
             r * sin(theta),  s * cos(phi);
        return m;
    }

    Point2<Scalar> translation() const { return Point2<Scalar>(e, f); }

    // Quadrant index 1..4 when this is a pure halving onto a quadrant of the unit square.
    std::optional<Symbol> quadrant() const
    {
        if (r != Scalar(0.5) || s != Scalar(0.5) || theta != Scalar(0) || phi != Scalar(0))
            return std::nullopt;
        const bool ex = e == Scalar(0.5);
        const bool fy = f == Scalar(0.5);
        if ((!ex && e != Scalar(0)) || (!fy && f != Scalar(0)))
            return std::nullopt;
        return static_cast<Symbol>(1 + (ex ? 1 : 0) + (fy ? 2 : 0));
    }
};

using AffineMap2D = AffineMap<double>;

template <typename Scalar, typename Derived>
Point2<Scalar> apply_map(const AffineMap<Scalar>& m, const Eigen::MatrixBase<Derived>& p)
{
    return m.linear() * p + m.translation();
}

template <typename Scalar>
class IfsSystem {
public:
    explicit IfsSystem(std::vector<AffineMap<Scalar>> maps,
                       std::optional<std::vector<Scalar>> probabilities = std::nullopt)
        : maps_(std::move(maps)), probabilities_(std::move(probabilities))
    {
        if (maps_.empty())
            throw UnsupportedMapError("an IFS needs at least one map");
        if (probabilities_) {
            if (probabilities_->size() != maps_.size())
                throw UnsupportedMapError("one probability per map is required");
            Scalar sum(0);
            for (Scalar p : *probabilities_) {
                if (!(p >= Scalar(0)))
                    throw UnsupportedMapError("probabilities must be non-negative");
                sum += p;
            }
            using std::abs;
            if (abs(sum - Scalar(1)) > Scalar(1e-12))
                throw UnsupportedMapError("probabilities must sum to 1");
        }
        for (const auto& m : maps_) {
            linear_.push_back(m.linear());
            translation_.push_back(m.translation());
        }
    }

    std::size_t size() const noexcept { return maps_.size(); }
    const std::vector<AffineMap<Scalar>>& maps() const noexcept { return maps_; }
    const AffineMap<Scalar>& map(std::size_t i) const { return maps_.at(i); }
    const std::optional<std::vector<Scalar>>& probabilities() const noexcept { return probabilities_; }

    bool contractive() const
    {
        using std::abs;
        for (const auto& m : maps_)
            if (!(abs(m.r) < Scalar(1) && abs(m.s) < Scalar(1)))
                return false;
        return true;
    }

    // T_index(p), index 0-based.
    template <typename Derived>
    Point2<Scalar> apply(std::size_t index, const Eigen::MatrixBase<Derived>& p) const
    {
        return linear_[index] * p + translation_[index];
    }

private:
    std::vector<AffineMap<Scalar>> maps_;
    std::optional<std::vector<Scalar>> probabilities_;
    std::vector<Linear2<Scalar>> linear_;
    std::vector<Point2<Scalar>> translation_;
};

using IfsSystem2D = IfsSystem<double>;

// Four quadrant maps moving halfway toward (0,0), (1,0), (0,1), (1,1).
template <typename Scalar = double>
IfsSystem<Scalar> standard_square_system(bool uniform_probabilities = false)
{
    const Scalar h(0.5), z(0);
    std::vector<AffineMap<Scalar>> maps{
        {h, h, z, z, z, z},
        {h, h, z, z, h, z},
        {h, h, z, z, z, h},
        {h, h, z, z, h, h},
    };
    if (uniform_probabilities)
        return IfsSystem<Scalar>(std::move(maps), std::vector<Scalar>(4, Scalar(0.25)));
    return IfsSystem<Scalar>(std::move(maps));
}

template <typename Scalar = double>
IfsSystem<Scalar> gasket_system()
{
    const Scalar h(0.5), z(0);
    return IfsSystem<Scalar>({
        {h, h, z, z, z, z},
        {h, h, z, z, h, z},
        {h, h, z, z, z, h},
    });
}

// Random IFS orbit: point t = T_{n_t}(point t-1), n_t from a seeded mt19937_64.
// Without probabilities the choice is rng() % N; otherwise a 53-bit uniform
// draw is located in the cumulative table.
template <typename Scalar>
std::vector<Point2<Scalar>> chaos_game(const IfsSystem<Scalar>& sys, std::size_t n,
                                       std::uint64_t seed, const Point2<Scalar>& start)
{
    if (!sys.contractive())
        throw UnsupportedMapError("chaos game requires a contractive system");
    std::vector<Point2<Scalar>> out;
    out.reserve(n);
    std::mt19937_64 rng(seed);
    std::vector<double> cumulative;
    if (const auto& probs = sys.probabilities()) {
        double acc = 0;
        for (Scalar p : *probs)
            cumulative.push_back(acc += static_cast<double>(p));
    }
    Point2<Scalar> p = start;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t index;
        if (cumulative.empty()) {
            index = static_cast<std::size_t>(rng() % sys.size());
        } else {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            index = 0;
            while (index + 1 < cumulative.size() && !(u < cumulative[index]))
                ++index;
        }
        p = sys.apply(index, p);
        out.push_back(p);
    }
    return out;
}

// Orbit driven by a symbol stream from start (default (0.5, 0.5)).
template <typename Scalar>
std::vector<Point2<Scalar>> driven_orbit(std::span<const Symbol> symbols, const IfsSystem<Scalar>& sys,
                                         const Point2<Scalar>& start = Point2<Scalar>(0.5, 0.5))
{
    for (Symbol s : symbols)
        if (s < 1 || s > sys.size())
            throw SymbolOutOfRangeError("symbol " + std::to_string(int(s)) + " outside 1.." +
                                        std::to_string(sys.size()));
    std::vector<Point2<Scalar>> out;
    out.reserve(symbols.size());
    Point2<Scalar> p = start;
    for (Symbol s : symbols) {
        p = sys.apply(s - 1, p);
        out.push_back(p);
    }
    return out;
}

// Base-4 cell label. digits[0] is the most recently applied transform.
// The empty address names the whole unit square.
class Address {
public:
    Address() = default;
    explicit Address(std::vector<Symbol> digits);

    // "2341" -> {2, 3, 4, 1}
    static Address parse(const std::string& text);

    const std::vector<Symbol>& digits() const noexcept { return digits_; }
    std::size_t depth() const noexcept { return digits_.size(); }
    std::string to_string() const;

    // T_d(cell): d becomes the new leading digit.
    Address prepended(Symbol d) const;

    friend auto operator<=>(const Address&, const Address&) = default;

private:
    std::vector<Symbol> digits_;
};

struct CellSet {
    std::size_t depth = 0;
    std::set<Address> members;

    static CellSet full_square() { return CellSet{0, {Address{}}}; }
};

struct Square {
    Point2d lower_left;
    double side;
};

// Images under quadrant maps: each step prepends the map index to every member.
// Throws UnsupportedMapError for maps that are not quadrant maps.
CellSet deterministic_iterate(const IfsSystem2D& sys, const CellSet& initial, std::size_t k);

// Cells are half-open [lo, lo + 2^-k); a coordinate of exactly 1 lands in the top cell.
Address address_of_point(const Point2d& p, std::size_t depth);

// T_{a1} o ... o T_{ak}(S)
Square cell_of_address(const Address& a);

} // namespace primeifs

#endif // PRIMEIFS_IFS_ENGINE_HPP
