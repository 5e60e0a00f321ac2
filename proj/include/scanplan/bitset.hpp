#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace scanplan {

// Fixed-size bitset sized at runtime. Backs visible sets and coverage masks,
// where union and popcount dominate.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::int64_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::int64_t size() const { return n_; }

    bool test(std::int64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::int64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::int64_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    std::int64_t count() const {
        std::int64_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    // |this & ~other|: how many set bits fall outside `other`.
    std::int64_t count_minus(const Bitset& o) const {
        std::int64_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += std::popcount(words_[i] & ~o.words_[i]);
        return c;
    }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

private:
    std::int64_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace scanplan
