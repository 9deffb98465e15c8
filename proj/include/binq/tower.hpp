#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "binq/gf2m.hpp"
#include "binq/poly.hpp"

namespace binq {

// k = GF(2^n) and extensions k_d = GF(2^(n d)), each with its own defining
// polynomial over F2. Elements are raw words; the level is implied by context.
class Tower {
public:
    static std::vector<int> default_levels() { return {1, 2, 3, 4, 5, 6, 7, 9, 12}; }

    explicit Tower(int n, std::vector<int> levels = default_levels(),
                   const std::map<int, u64>& moduli = {});

    int n() const { return n_; }
    u64 q() const { return u64(1) << n_; }
    const std::vector<int>& levels() const { return levels_; }
    bool has(int d) const { return fields_.count(d) != 0; }
    const Field& F(int d) const;
    const Field& k() const { return F(1); }

    // embedding k_e -> k_d for e | d, compatible with the embeddings of k
    u64 embed(u64 x, int from, int to) const;
    std::optional<u64> descend(u64 x, int from, int to) const;
    // smallest e | d with x in k_e
    int level_of(u64 x, int d) const;

    // x^(q^i) at level d
    u64 frob(u64 x, int d, int i = 1) const;
    // Tr_{k_from / k_to}
    u64 rel_trace(u64 x, int from, int to) const;
    u64 rel_norm(u64 x, int from, int to) const;
    bool in_artin_schreier(u64 r) const { return k().trace(r) == 0; }

    // x with x^2 + x = c in level d (requires absolute trace 0); smallest root
    std::optional<u64> solve_as(u64 c, int d) const;
    // x with x + x^q = c at level d, requires Tr_{k_d/k}(c) = 0
    std::optional<u64> additive_h90(u64 c, int d) const;
    // s with t = s / s^q at level d, requires N_{k_d/k}(t) = 1
    std::optional<u64> hilbert90(u64 t, int d) const;

    // "deg:hex" lines, one per level
    std::string table() const;
    static std::map<int, u64> parse_table(const std::string& text);

private:
    struct Emb {
        std::vector<u64> img;     // images of the basis x^j
        std::vector<u64> pvec;    // echelon vectors
        std::vector<u64> pcomb;   // source combinations
        std::vector<int> pbit;    // pivot bit per echelon vector
    };
    const Emb& emb(int from, int to) const;

    int n_;
    std::vector<int> levels_;
    std::map<int, Field> fields_;
    std::map<std::pair<int, int>, Emb> embs_;
};

}  // namespace binq
