#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace binq {

// Bit vector over F2 of fixed length.
struct BitVec {
    std::vector<std::uint64_t> w;
    int n = 0;

    BitVec() = default;
    explicit BitVec(int len) : w((len + 63) / 64, 0), n(len) {}
    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v = true) {
        if (v)
            w[i >> 6] |= std::uint64_t(1) << (i & 63);
        else
            w[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }
    void flip(int i) { w[i >> 6] ^= std::uint64_t(1) << (i & 63); }
    BitVec& operator^=(const BitVec& o) {
        for (size_t i = 0; i < w.size(); i++) w[i] ^= o.w[i];
        return *this;
    }
    bool zero() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
    bool operator==(const BitVec& o) const { return n == o.n && w == o.w; }
};

// Solution set of an F2 affine system A x = b, A given by its columns.
struct AffineSolution {
    BitVec particular;
    std::vector<BitVec> kernel;
};

// cols[j] is A e_j (length rows); returns the solutions of A x = b.
std::optional<AffineSolution> solve_f2(const std::vector<BitVec>& cols, const BitVec& b);

}  // namespace binq
