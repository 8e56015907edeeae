#ifndef PRIMEIFS_PRIME_STREAM_HPP
#define PRIMEIFS_PRIME_STREAM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace primeifs {

// Largest value the sieve will touch. Base primes stay below sqrt of this.
inline constexpr std::uint64_t kMaxSieveValue = 1'000'000'000'000'000ULL;

// Integers covered by one sieve segment.
inline constexpr std::uint64_t kSegmentSpan = std::uint64_t{1} << 20;

enum class RangeMode { ByValueRange, ByCountFrom };

// Either "every prime in [lo, hi]" or "the first `count` primes >= lo".
struct PrimeRangeQuery {
    RangeMode mode = RangeMode::ByValueRange;
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::uint64_t count = 0;

    static PrimeRangeQuery by_value(std::uint64_t lo, std::uint64_t hi);
    static PrimeRangeQuery by_count(std::uint64_t lo, std::uint64_t count);

    void validate() const;
    std::string describe() const;
};

// Centers n with n - offset and n + offset both prime; `centers` ranges over n.
struct TupleCenterQuery {
    std::uint64_t offset = 1;
    PrimeRangeQuery centers;
};

struct SieveOptions {
    std::size_t workers = 0; // 0: default_workers()
    std::uint64_t max_value = kMaxSieveValue;
};

struct TwinPair {
    std::uint64_t first;
    std::uint64_t second;

    friend bool operator==(const TwinPair&, const TwinPair&) = default;
};

// Ascending primes >= start, produced a batch of segments at a time.
// Segments inside a batch are sieved concurrently and joined in order.
class PrimeCursor {
public:
    explicit PrimeCursor(std::uint64_t start, SieveOptions opts = {});

    // Empty once max_value has been passed.
    std::span<const std::uint64_t> next_batch();

    bool exhausted() const noexcept { return next_low_ > opts_.max_value; }

private:
    void ensure_base_primes(std::uint64_t hi);

    std::uint64_t start_;
    std::uint64_t next_low_;
    SieveOptions opts_;
    std::vector<std::uint32_t> base_primes_;
    std::uint64_t base_limit_ = 0;
    std::vector<std::vector<std::uint64_t>> shards_;
    std::vector<std::uint64_t> batch_;
};

[[noreturn]] void throw_capacity(std::uint64_t bound);

// Calls fn(p) for ascending primes >= start until fn returns false.
// Throws CapacityError if max_value is reached first.
template <typename Fn>
void for_each_prime(std::uint64_t start, Fn&& fn, SieveOptions opts = {})
{
    PrimeCursor cursor(start, opts);
    for (;;) {
        auto batch = cursor.next_batch();
        if (batch.empty())
            break;
        for (std::uint64_t p : batch)
            if (!fn(p))
                return;
    }
    throw_capacity(opts.max_value);
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi,
                                           SieveOptions opts = {});
std::vector<std::uint64_t> primes_from_count(std::uint64_t start_value, std::uint64_t count,
                                             SieveOptions opts = {});
std::vector<std::uint64_t> primes(const PrimeRangeQuery& query, SieveOptions opts = {});

// pi(hi) - pi(lo - 1).
std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, SieveOptions opts = {});

// 1-based: nth_prime(1) == 2.
std::uint64_t nth_prime(std::uint64_t index, SieveOptions opts = {});

// ByValueRange keeps pairs with lo <= p and p + 2 <= hi.
// ByCountFrom returns the first `count` pairs with p >= lo.
std::vector<TwinPair> twin_pairs(const PrimeRangeQuery& query, SieveOptions opts = {});

std::vector<std::uint64_t> tuple_centers(const TupleCenterQuery& query, SieveOptions opts = {});

} // namespace primeifs

#endif // PRIMEIFS_PRIME_STREAM_HPP
