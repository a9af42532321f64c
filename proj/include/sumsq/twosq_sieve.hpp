#pragma once

// Segmented enumeration of E, the set of sums of two squares, by lattice
// marking: every x^2 + y^2 with 0 <= x <= y falling in the segment is set.

#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sumsq::twosq {

using u64 = std::uint64_t;

struct SieveOptions {
    u64 segment_length = u64{1} << 24;
    u64 max_segment_length = u64{1} << 33;  // bits, i.e. 1 GiB of bitmap
    unsigned workers = 1;
    std::string cache_dir;                  // empty: no bitmap cache
};

/// Membership bitmap for the half-open range [lo, hi). Bit j (little-endian
/// within 64-bit words) marks lo + j.
class TwoSqSegment {
public:
    TwoSqSegment() = default;
    TwoSqSegment(u64 lo, u64 hi, std::vector<u64> words);

    u64 lo() const { return lo_; }
    u64 hi() const { return hi_; }
    u64 size() const { return hi_ - lo_; }
    std::span<const u64> words() const { return words_; }

    bool contains(u64 n) const
    {
        if (n < lo_ || n >= hi_) return false;
        const u64 j = n - lo_;
        return (words_[j >> 6] >> (j & 63)) & 1;
    }

    u64 count() const;
    std::vector<u64> members() const;

    /// Calls f(n) for every member in ascending order.
    template <class F>
    void for_each_member(F&& f) const
    {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            u64 bits = words_[w];
            while (bits) {
                const unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
                f(lo_ + (static_cast<u64>(w) << 6) + b);
                bits &= bits - 1;
            }
        }
    }

    /// Joins an adjacent segment starting at hi().
    TwoSqSegment concat(const TwoSqSegment& next) const;

    bool operator==(const TwoSqSegment&) const = default;

    /// Raw dump: lo and hi as 8-byte little-endian, then the words.
    void write(std::ostream& out) const;
    static TwoSqSegment read(std::istream& in);

private:
    u64 lo_ = 0;
    u64 hi_ = 0;
    std::vector<u64> words_;
};

/// Exact bitmap for [lo, hi). Throws SegmentTooLarge beyond the memory cap.
TwoSqSegment sieve_segment(u64 lo, u64 hi, const SieveOptions& options = {});

/// Loads [lo, hi) from options.cache_dir when present, otherwise sieves it
/// (and stores it when a cache directory is configured).
TwoSqSegment load_or_sieve(u64 lo, u64 hi, const SieveOptions& options);

struct Term {
    u64 index;  // 1-based: E_1 = 0
    u64 value;
};

/// Unbounded ordered stream E_1 < E_2 < ... built by chaining segments.
/// With workers > 1 the next segments are sieved ahead in parallel; the
/// output order never depends on the worker count.
class EStream {
public:
    explicit EStream(SieveOptions options = {});

    Term next();

    /// Segment currently being consumed (for callers that want raw bitmaps).
    const TwoSqSegment& current_segment() const { return current_; }

private:
    void advance_segment();
    void schedule();

    SieveOptions options_;
    TwoSqSegment current_;
    std::deque<std::future<TwoSqSegment>> pending_;
    u64 next_lo_ = 0;
    u64 word_ = 0;
    u64 bits_ = 0;
    u64 index_ = 0;
    bool started_ = false;
};

/// Emits (n, E_n) for every E_n <= x_max.
void stream_E(u64 x_max, const std::function<void(Term)>& sink, const SieveOptions& options = {});

/// #{n : E_n <= x}.
u64 count_N(u64 x, const SieveOptions& options = {});

} // namespace sumsq::twosq
