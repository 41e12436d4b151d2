#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lge {

// Fixed-size dense bit vector. Subsets of a point space are bit-indexed
// by the mixed-radix point index, so membership, boolean algebra and the
// stride-wise quantifier smear are all word operations.
class DenseSet {
public:
    DenseSet() = default;
    explicit DenseSet(std::size_t n, bool ones = false)
        : size_(n), words_((n + 63) / 64, ones ? ~std::uint64_t(0) : 0) {
        trim();
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    void set(std::size_t i, bool v = true) {
        std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    bool all() const { return count() == size_; }

    DenseSet& operator&=(const DenseSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    DenseSet& operator|=(const DenseSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    friend DenseSet operator&(DenseSet a, const DenseSet& b) { return a &= b; }
    friend DenseSet operator|(DenseSet a, const DenseSet& b) { return a |= b; }

    DenseSet complement() const {
        DenseSet r(*this);
        for (auto& w : r.words_) w = ~w;
        r.trim();
        return r;
    }

    bool is_subset_of(const DenseSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    friend bool operator==(const DenseSet& a, const DenseSet& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    // Ascending set-bit indices.
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                unsigned bit = static_cast<unsigned>(__builtin_ctzll(w));
                out.push_back((wi << 6) + bit);
                w &= w - 1;
            }
        }
        return out;
    }

    std::size_t hash() const {
        std::size_t h = size_;
        for (auto w : words_) h ^= static_cast<std::size_t>(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

private:
    void trim() {
        if (size_ & 63 && !words_.empty()) words_.back() &= (std::uint64_t(1) << (size_ & 63)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace lge
