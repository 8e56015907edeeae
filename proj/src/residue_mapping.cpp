#include "primeifs/residue_mapping.hpp"

#include "primeifs/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace primeifs {

ResidueAlphabet::ResidueAlphabet(std::uint64_t modulus, const Ordering& classes)
    : modulus_(modulus), classes_(classes), reduced_(false)
{
    if (modulus < 2)
        throw InvalidModulusError("modulus must be >= 2");
    if (modulus > (std::uint64_t{1} << 24))
        throw InvalidModulusError("modulus too large for a lookup table");
    lookup_.assign(modulus, 0);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i] >= modulus)
            throw InvalidModulusError("class " + std::to_string(classes[i]) +
                                      " not in [0, " + std::to_string(modulus) + ")");
        if (lookup_[classes[i]] != 0)
            throw InvalidModulusError("duplicate class " + std::to_string(classes[i]));
        lookup_[classes[i]] = static_cast<Symbol>(i + 1);
    }
    auto units = reduced_residues(modulus);
    Ordering sorted = classes;
    std::sort(sorted.begin(), sorted.end());
    reduced_ = units.size() == 4 && std::equal(units.begin(), units.end(), sorted.begin());
}

std::string ResidueAlphabet::describe() const
{
    return "[" + format_ordering(classes_) + "] mod " + std::to_string(modulus_);
}

std::vector<Residue> reduced_residues(std::uint64_t q)
{
    std::vector<Residue> out;
    for (std::uint64_t r = 1; r <= q; ++r)
        if (std::gcd(r, q) == 1)
            out.push_back(r);
    return out;
}

std::vector<Ordering> canonical_orderings(std::uint64_t q)
{
    if (q < 2)
        throw InvalidModulusError("modulus must be >= 2");
    const auto units = reduced_residues(q);
    if (units.size() != 4)
        throw InvalidModulusError("modulus " + std::to_string(q) + " has " +
                                  std::to_string(units.size()) +
                                  " reduced residues; exactly 4 are required");

    std::array<Residue, 3> rest{units[1], units[2], units[3]};
    std::vector<Ordering> out;
    do {
        const Ordering o{units[0], rest[0], rest[1], rest[2]};
        // Reversing the circle with the first vertex held fixed.
        const Ordering mirrored{units[0], rest[2], rest[1], rest[0]};
        const Ordering& rep = std::min(o, mirrored);
        if (std::find(out.begin(), out.end(), rep) == out.end())
            out.push_back(rep);
    } while (std::next_permutation(rest.begin(), rest.end()));
    std::sort(out.begin(), out.end());
    return out;
}

SymbolStream symbolize(std::span<const std::uint64_t> values, const ResidueAlphabet& alphabet)
{
    SymbolStream out;
    out.symbols.reserve(values.size());
    for (std::uint64_t v : values) {
        const auto s = alphabet.symbol_of(v);
        if (!s)
            throw UnmappedResidueError(v, alphabet.modulus());
        out.symbols.push_back(*s);
    }
    out.provenance = alphabet.describe();
    return out;
}

namespace {

template <typename Fn>
SymbolStream derive(const SymbolStream& s, const char* tag, Fn&& step)
{
    if (s.size() < 2)
        throw ShortStreamError(std::string(tag) + " needs at least 2 symbols");
    SymbolStream out;
    out.symbols.resize(s.size() - 1);
    for (std::size_t t = 0; t + 1 < s.size(); ++t)
        out.symbols[t] = step(s.symbols[t], s.symbols[t + 1]);
    out.provenance = std::string(tag) + "(" + s.provenance + ")";
    return out;
}

} // namespace

SymbolStream abs_diff_stream(const SymbolStream& s)
{
    return derive(s, "absdiff", [](Symbol a, Symbol b) {
        return static_cast<Symbol>((a > b ? a - b : b - a) + 1);
    });
}

SymbolStream rot_distance_stream(const SymbolStream& s)
{
    return derive(s, "rotdist", [](Symbol first, Symbol after) {
        return static_cast<Symbol>(rot_distance(after, first) + 1);
    });
}

Ordering parse_ordering(const std::string& text)
{
    std::string cleaned = text;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::vector<Residue> values;
    long long v = 0;
    while (in >> v) {
        if (v < 0)
            throw InvalidModulusError("negative residue in ordering \"" + text + "\"");
        values.push_back(static_cast<Residue>(v));
    }
    if (!in.eof() || values.size() != 4)
        throw InvalidModulusError("ordering must list exactly 4 residues: \"" + text + "\"");
    return {values[0], values[1], values[2], values[3]};
}

std::string format_ordering(const Ordering& ordering)
{
    std::string out;
    for (std::size_t i = 0; i < ordering.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(ordering[i]);
    }
    return out;
}

} // namespace primeifs
