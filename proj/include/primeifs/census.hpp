#ifndef PRIMEIFS_CENSUS_HPP
#define PRIMEIFS_CENSUS_HPP

#include "primeifs/prime_stream.hpp"
#include "primeifs/residue_mapping.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace primeifs {

enum class KeyKind { Address, ResidueTuple, DistanceClass };

// Address keys hold digits (most recent first); residue tuples hold residues
// in stream order; distance keys hold a single distance 0..3.
using CountKey = std::vector<std::uint64_t>;

// Which range convention produced a census.
struct RangeConvention {
    std::string source = "symbols";
    std::optional<PrimeRangeQuery> query;

    std::string describe() const;
};

struct FrequencyTable {
    KeyKind key_kind = KeyKind::Address;
    std::size_t arity = 0;
    std::map<CountKey, std::uint64_t> entries;
    std::uint64_t total = 0;
    RangeConvention convention;
    std::optional<ResidueAlphabet> alphabet; // set for ResidueTuple tables

    std::uint64_t count(const CountKey& key) const;
    std::string key_label(const CountKey& key) const;
    // For residue tuples: the IFS address of the tuple under `alphabet`.
    std::optional<std::string> address_label(const CountKey& key) const;
};

// Window (s_t, ..., s_{t+k-1}) is keyed by its reversal, the address of the
// orbit point after s_{t+k-1}. Only observed addresses appear.
FrequencyTable kgram_frequencies(const SymbolStream& s, std::size_t k, std::size_t workers = 0);

// Counts of consecutive k-tuples of residues. The full alphabet^k key space
// is materialized (zero-filled) for k <= 8.
FrequencyTable residue_tuple_counts(std::span<const std::uint64_t> values,
                                    const ResidueAlphabet& alphabet, std::size_t k,
                                    std::size_t workers = 0);

// Same as residue_tuple_counts, from an already symbolized stream.
FrequencyTable residue_tuple_counts(const SymbolStream& s, const ResidueAlphabet& alphabet,
                                    std::size_t k, std::size_t workers = 0);

FrequencyTable residue_pair_counts(std::span<const std::uint64_t> values,
                                   const ResidueAlphabet& alphabet, std::size_t workers = 0);

// Forward rotational distances of consecutive symbols, keys 0..3 (zero-filled).
FrequencyTable distance_frequencies(const SymbolStream& s);

// Sample standard deviation (divisor n - 1) across all entries.
double stddev_of_counts(const FrequencyTable& t);

// Ascending by count, ties broken by key.
std::vector<std::pair<CountKey, std::uint64_t>> sorted_entries(const FrequencyTable& t);

nlohmann::json to_json(const RangeConvention& c);
nlohmann::json to_json(const FrequencyTable& t);

enum class SigmaInterpretation {
    WindowWidth, // primes in [x0, x0 + size]
    PrimeCount,  // `size` primes >= x0
    PrimeIndex,  // `size` primes starting at the x0-th prime
};

std::string to_string(SigmaInterpretation i);

struct SigmaScanRow {
    std::uint64_t x0 = 0;
    double sigma = 0;
    SigmaInterpretation interpretation = SigmaInterpretation::PrimeCount;
    std::uint64_t first_prime = 0;
    std::uint64_t primes_used = 0;
};

std::vector<SigmaScanRow> sigma_scan(std::span<const std::uint64_t> x0_list, std::uint64_t size,
                                     const ResidueAlphabet& alphabet,
                                     SigmaInterpretation interpretation, SieveOptions opts = {});

nlohmann::json to_json(const SigmaScanRow& row);

struct TwinCensus {
    FrequencyTable concatenated;   // residue pairs along p1, p1+2, p2, p2+2, ...
    FrequencyTable twin_classes;   // (p mod q, (p + 2) mod q) per pair
    std::vector<CountKey> forbidden; // zero-count keys of `concatenated`
    SymbolStream concatenated_symbols;
    std::uint64_t dropped_pairs = 0;
};

// A pair with a member outside the alphabet (e.g. (5, 7) mod 10) is dropped
// as a unit; transitions into and out of it are skipped, never bridged.
TwinCensus twin_census(std::span<const TwinPair> pairs, const ResidueAlphabet& alphabet);

nlohmann::json to_json(const TwinCensus& c);

FrequencyTable tuple_center_census(std::span<const std::uint64_t> centers,
                                   const ResidueAlphabet& alphabet, std::size_t k,
                                   std::size_t workers = 0);

} // namespace primeifs

#endif // PRIMEIFS_CENSUS_HPP
