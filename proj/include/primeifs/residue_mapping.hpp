#ifndef PRIMEIFS_RESIDUE_MAPPING_HPP
#define PRIMEIFS_RESIDUE_MAPPING_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace primeifs {

using Residue = std::uint64_t;
using Ordering = std::array<Residue, 4>;
using Symbol = std::uint8_t; // transform index 1..4

// Four residue classes mod q; class i drives transform T_{i+1}.
class ResidueAlphabet {
public:
    // Classes must be distinct and lie in [0, q). `reduced` is derived:
    // true when the classes are exactly the units mod q.
    ResidueAlphabet(std::uint64_t modulus, const Ordering& classes);

    std::uint64_t modulus() const noexcept { return modulus_; }
    const Ordering& classes() const noexcept { return classes_; }
    bool reduced() const noexcept { return reduced_; }

    // 1-based position of value mod q, if mapped.
    std::optional<Symbol> symbol_of(std::uint64_t value) const noexcept
    {
        const Symbol s = lookup_[value % modulus_];
        if (s == 0)
            return std::nullopt;
        return s;
    }

    Residue residue_of(Symbol s) const { return classes_.at(s - 1); }

    // "[a b c d] mod q"
    std::string describe() const;

private:
    std::uint64_t modulus_;
    Ordering classes_;
    bool reduced_;
    std::vector<Symbol> lookup_;
};

struct SymbolStream {
    std::vector<Symbol> symbols;
    std::string provenance;

    std::size_t size() const noexcept { return symbols.size(); }
};

// Residues in [1, q] coprime to q, ascending.
std::vector<Residue> reduced_residues(std::uint64_t q);

// The three vertex orderings of the four units mod q that are inequivalent
// under circular reversal, each starting with the smallest unit, sorted.
std::vector<Ordering> canonical_orderings(std::uint64_t q);

// Throws UnmappedResidueError at the first value outside the alphabet.
SymbolStream symbolize(std::span<const std::uint64_t> values, const ResidueAlphabet& alphabet);

// |s[t+1] - s[t]| + 1
SymbolStream abs_diff_stream(const SymbolStream& s);

// ((s[t+1] - s[t]) mod 4) + 1: forward rotational distance, shifted to a symbol.
SymbolStream rot_distance_stream(const SymbolStream& s);

inline int rot_distance(Symbol applied_after, Symbol applied_first)
{
    return ((static_cast<int>(applied_after) - static_cast<int>(applied_first)) % 4 + 4) % 4;
}

// Parses "1 3 7 9" (spaces or commas).
Ordering parse_ordering(const std::string& text);
std::string format_ordering(const Ordering& ordering);

} // namespace primeifs

#endif // PRIMEIFS_RESIDUE_MAPPING_HPP
