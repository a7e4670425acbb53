#pragma once
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "kfree/arith.hpp"

// Bulk precomputation: primes, Moebius values, and k-free indicator tables
// over intervals, segmented for memory control.  Tables are immutable once
// built and safe to share across threads.

namespace kfree {

// All primes <= limit, ascending and complete.
class PrimeTable {
public:
    u64 limit() const { return limit_; }
    const std::vector<u64>& primes() const { return primes_; }

    // pi(x) for x <= limit, by binary search.
    u64 count_up_to(u64 x) const;

    friend PrimeTable primes_up_to(u64 limit);

private:
    u64 limit_ = 0;
    std::vector<u64> primes_;
};

// limit >= 2, limit <= 2^32 for the in-memory variant.
PrimeTable primes_up_to(u64 limit);

// mu(n) for 1 <= n <= limit, via a linear smallest-prime-factor sieve.
class MobiusTable {
public:
    u64 limit() const { return limit_; }
    int operator[](u64 n) const { return values_[n]; }

    friend MobiusTable mobius_up_to(u64 limit);

private:
    u64 limit_ = 0;
    std::vector<std::int8_t> values_; // index 0 unused
};

MobiusTable mobius_up_to(u64 limit);

// Bit per integer n in [lo, hi]; bit set iff n is k-free.  The in-memory
// layout equals the KFSV on-disk payload: bit j of byte i corresponds to
// n = lo + 8i + j.
class KfreeTable {
public:
    KfreeTable() = default;
    KfreeTable(u64 lo, u64 hi, int k, std::vector<std::uint8_t> bits);

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }
    int k() const { return k_; }

    bool test(u64 n) const {
        u64 idx = n - lo_;
        return (bits_[idx >> 3] >> (idx & 7)) & 1;
    }
    bool contains(u64 n) const { return n >= lo_ && n <= hi_; }

    // number of k-free integers in the table
    u64 count_set() const;

    std::span<const std::uint8_t> payload() const { return bits_; }

    bool operator==(const KfreeTable& other) const = default;

    // KFSV cache file, bit-exact: magic "KFSV", version u8 = 1, k u8,
    // lo u64 LE, hi u64 LE, then ceil((hi-lo+1)/8) payload bytes.
    void save(const std::filesystem::path& file) const;
    static KfreeTable load(const std::filesystem::path& file);

private:
    u64 lo_ = 1, hi_ = 1;
    int k_ = 2;
    std::vector<std::uint8_t> bits_;
};

struct SieveOptions {
    u64 segment_width = u64{1} << 22; // entries per segment; rounded up to a
                                      // multiple of 64 so segments never share
                                      // a byte across workers
    u64 max_entries = u64{1} << 31;   // in-memory budget
    unsigned threads = 1;
};

// k-free flags for [lo, hi], k >= 2, by striking multiples of p^k for all
// p <= hi^(1/k), segment by segment.  Result is independent of segment width
// and worker count.
KfreeTable kfree_flags(u64 lo, u64 hi, int k, const SieveOptions& opts = {});

// Streaming variant for ranges that exceed the in-memory budget: fn is called
// once per segment, in order, with the segment bounds and one bit per integer
// (bit layout as in KfreeTable, relative to seg_lo).
void kfree_flags_stream(u64 lo, u64 hi, int k, u64 segment_width,
                        const std::function<void(u64 seg_lo, u64 seg_hi,
                                                 std::span<const std::uint8_t>)>& fn);

} // namespace kfree
