#include "primeifs/ifs_engine.hpp"

namespace primeifs {

Address::Address(std::vector<Symbol> digits) : digits_(std::move(digits))
{
    for (Symbol d : digits_)
        if (d < 1 || d > 4)
            throw SymbolOutOfRangeError("address digit " + std::to_string(int(d)) + " outside 1..4");
}

Address Address::parse(const std::string& text)
{
    std::vector<Symbol> digits;
    for (char c : text) {
        if (c < '1' || c > '4')
            throw SymbolOutOfRangeError("bad address \"" + text + "\"");
        digits.push_back(static_cast<Symbol>(c - '0'));
    }
    return Address(std::move(digits));
}

std::string Address::to_string() const
{
    std::string out;
    out.reserve(digits_.size());
    for (Symbol d : digits_)
        out.push_back(static_cast<char>('0' + d));
    return out;
}

Address Address::prepended(Symbol d) const
{
    std::vector<Symbol> digits;
    digits.reserve(digits_.size() + 1);
    digits.push_back(d);
    digits.insert(digits.end(), digits_.begin(), digits_.end());
    return Address(std::move(digits));
}

CellSet deterministic_iterate(const IfsSystem2D& sys, const CellSet& initial, std::size_t k)
{
    std::vector<Symbol> quadrant;
    for (const auto& m : sys.maps()) {
        const auto q = m.quadrant();
        if (!q)
            throw UnsupportedMapError("deterministic iteration needs quadrant maps "
                                      "(halving plus translation by 0 or 0.5)");
        quadrant.push_back(*q);
    }
    for (const auto& a : initial.members)
        if (a.depth() != initial.depth)
            throw UnsupportedMapError("cell set mixes depths");

    CellSet current = initial;
    for (std::size_t step = 0; step < k; ++step) {
        CellSet next{current.depth + 1, {}};
        for (Symbol q : quadrant)
            for (const auto& a : current.members)
                next.members.insert(a.prepended(q));
        current = std::move(next);
    }
    return current;
}

Address address_of_point(const Point2d& p, std::size_t depth)
{
    double x = p.x();
    double y = p.y();
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw OutOfUnitSquareError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                                   ") outside the unit square");
    std::vector<Symbol> digits;
    digits.reserve(depth);
    for (std::size_t i = 0; i < depth; ++i) {
        // Doubling and subtracting 1 are exact in binary floating point.
        const int bx = x >= 0.5 ? 1 : 0;
        const int by = y >= 0.5 ? 1 : 0;
        digits.push_back(static_cast<Symbol>(1 + bx + 2 * by));
        x = 2.0 * x - bx;
        y = 2.0 * y - by;
    }
    return Address(std::move(digits));
}

Square cell_of_address(const Address& a)
{
    Point2d corner(0.0, 0.0);
    double side = 1.0;
    for (Symbol d : a.digits()) {
        side *= 0.5;
        corner.x() += ((d - 1) & 1) ? side : 0.0;
        corner.y() += ((d - 1) & 2) ? side : 0.0;
    }
    return {corner, side};
}

} // namespace primeifs
