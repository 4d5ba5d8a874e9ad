#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

namespace gp::util {

/*
  Small helpers shared across the planner. Prop and conflict sets are kept as
  sorted vectors of ids; the helpers below assume and preserve that order.
*/

template <typename T>
bool sorted_contains(const std::vector<T> &v, const T &x) {
    return std::binary_search(v.begin(), v.end(), x);
}

template <typename T>
void sorted_insert(std::vector<T> &v, const T &x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x)
        v.insert(it, x);
}

template <typename T>
void sorted_union_into(std::vector<T> &dst, const std::vector<T> &src) {
    if (src.empty())
        return;
    std::vector<T> out;
    out.reserve(dst.size() + src.size());
    std::set_union(dst.begin(), dst.end(), src.begin(), src.end(),
                   std::back_inserter(out));
    dst = std::move(out);
}

template <typename T>
bool sorted_is_subset(const std::vector<T> &sub, const std::vector<T> &super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

template <typename T>
std::vector<T> sorted_dedup(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

template <typename T>
bool sorted_intersects(const std::vector<T> &a, const std::vector<T> &b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return true;
    }
    return false;
}

// Symmetric boolean relation over {0..n-1} with an always-false diagonal.
// Backed by a triangular bit array so level matrices stay dense and cheap.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(int n) : n_(n), bits_((cell_count(n) + 63) / 64, 0) {}

    int size() const { return n_; }

    void set(int i, int j) {
        assert(i != j);
        std::size_t c = cell(i, j);
        bits_[c >> 6] |= (std::uint64_t{1} << (c & 63));
    }

    bool get(int i, int j) const {
        if (i == j)
            return false;
        std::size_t c = cell(i, j);
        return (bits_[c >> 6] >> (c & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t total = 0;
        for (std::uint64_t w : bits_)
            total += static_cast<std::size_t>(__builtin_popcountll(w));
        return total;
    }

    bool operator==(const BitMatrix &other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

private:
    static std::size_t cell_count(int n) {
        return static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    }

    std::size_t cell(int i, int j) const {
        assert(0 <= i && i < n_ && 0 <= j && j < n_);
        if (i > j)
            std::swap(i, j);
        // Row i starts after the triangle above it.
        std::size_t row_start =
            static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2;
        return row_start + static_cast<std::size_t>(j - i - 1);
    }

    int n_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Deterministic RNG: std::mt19937_64 for the stream, with a hand-bounded draw
// so value shuffles do not depend on the standard library's unspecified
// distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        // splitmix64; small, portable, well understood.
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); bound > 0. Rejection-free multiply-shift is fine
    // at this scale and deterministic everywhere.
    std::uint64_t below(std::uint64_t bound) {
        assert(bound > 0);
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::uint64_t state_;
};

} // namespace gp::util
