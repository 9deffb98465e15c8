#include "binq/gf2lin.hpp"

namespace binq {

std::optional<AffineSolution> solve_f2(const std::vector<BitVec>& cols, const BitVec& b) {
    int nc = int(cols.size());
    int nr = b.n;
    std::vector<BitVec> rows(nr, BitVec(nc + 1));
    for (int j = 0; j < nc; j++)
        for (int i = 0; i < nr; i++)
            if (cols[j].get(i)) rows[i].set(j);
    for (int i = 0; i < nr; i++)
        if (b.get(i)) rows[i].set(nc);

    std::vector<int> pivcol;
    int r = 0;
    for (int c = 0; c < nc && r < nr; c++) {
        int p = -1;
        for (int i = r; i < nr; i++)
            if (rows[i].get(c)) { p = i; break; }
        if (p < 0) continue;
        std::swap(rows[p], rows[r]);
        for (int i = 0; i < nr; i++)
            if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
        pivcol.push_back(c);
        r++;
    }
    for (int i = r; i < nr; i++)
        if (rows[i].get(nc)) return std::nullopt;

    AffineSolution s;
    s.particular = BitVec(nc);
    for (int i = 0; i < r; i++)
        if (rows[i].get(nc)) s.particular.set(pivcol[i]);
    std::vector<char> is_piv(nc, 0);
    for (int c : pivcol) is_piv[c] = 1;
    for (int f = 0; f < nc; f++) {
        if (is_piv[f]) continue;
        BitVec k(nc);
        k.set(f);
        for (int i = 0; i < r; i++)
            if (rows[i].get(f)) k.set(pivcol[i]);
        s.kernel.push_back(k);
    }
    return s;
}

}  // namespace binq
