#include "binq/tower.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace binq {

Tower::Tower(int n, std::vector<int> levels, const std::map<int, u64>& moduli) : n_(n), levels_(std::move(levels)) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (std::find(levels_.begin(), levels_.end(), 1) == levels_.end()) levels_.push_back(1);
    std::sort(levels_.begin(), levels_.end());
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    for (int d : levels_) {
        int m = n * d;
        if (m > 63) throw std::invalid_argument("tower level exceeds 63 bits");
        auto it = moduli.find(m);
        u64 f = it != moduli.end() ? it->second : default_modulus(m);
        fields_.emplace(d, Field(m, f));
    }

    // embeddings of k first: the least root of the defining polynomial of k
    const Field& K = F(1);
    Poly pk;
    for (int j = 0; j <= n; j++) pk.push_back((K.modulus() >> j) & 1);
    auto build = [&](Emb& e, const Field& src, u64 root, const Field& dst) {
        e.img.resize(src.m());
        u64 p = 1;
        for (int j = 0; j < src.m(); j++) {
            e.img[j] = p;
            p = dst.mul(p, root);
        }
        // echelon form for descent
        for (int j = 0; j < src.m(); j++) {
            u64 v = e.img[j], c = u64(1) << j;
            for (size_t i = 0; i < e.pvec.size(); i++)
                if ((v >> e.pbit[i]) & 1) {
                    v ^= e.pvec[i];
                    c ^= e.pcomb[i];
                }
            if (!v) throw std::logic_error("embedding not injective");
            int b = bitdeg(v);
            for (size_t i = 0; i < e.pvec.size(); i++)
                if ((e.pvec[i] >> b) & 1) {
                    e.pvec[i] ^= v;
                    e.pcomb[i] ^= c;
                }
            e.pvec.push_back(v);
            e.pcomb.push_back(c);
            e.pbit.push_back(b);
        }
    };
    for (int d : levels_) {
        const Field& D = F(d);
        auto rts = poly::roots(D, pk);
        if (rts.empty()) throw std::logic_error("no root of the base modulus");
        build(embs_[{1, d}], K, rts.front(), D);
    }
    // k_e -> k_d: least root agreeing with the embeddings of k
    u64 gk = (n == 1) ? 1 : 2;
    for (int e : levels_) {
        if (e == 1) continue;
        const Field& E = F(e);
        Poly pe;
        for (int j = 0; j <= E.m(); j++) pe.push_back((E.modulus() >> j) & 1);
        for (int d : levels_) {
            if (d == e || d % e) continue;
            const Field& D = F(d);
            u64 target = embed(gk, 1, d);
            u64 ge = embed(gk, 1, e);
            bool ok = false;
            for (u64 r : poly::roots(D, pe)) {
                Emb t;
                build(t, E, r, D);
                u64 img = 0;
                for (int j = 0; j < E.m(); j++)
                    if ((ge >> j) & 1) img ^= t.img[j];
                if (img == target) {
                    embs_[{e, d}] = std::move(t);
                    ok = true;
                    break;
                }
            }
            if (!ok) throw std::logic_error("no compatible embedding");
        }
    }
}

const Field& Tower::F(int d) const {
    auto it = fields_.find(d);
    if (it == fields_.end()) throw std::out_of_range("tower level " + std::to_string(d) + " not built");
    return it->second;
}

const Tower::Emb& Tower::emb(int from, int to) const {
    auto it = embs_.find({from, to});
    if (it == embs_.end()) throw std::out_of_range("no embedding between these levels");
    return it->second;
}

u64 Tower::embed(u64 x, int from, int to) const {
    if (from == to) return x;
    const Emb& e = emb(from, to);
    u64 r = 0;
    while (x) {
        int j = __builtin_ctzll(x);
        r ^= e.img[j];
        x &= x - 1;
    }
    return r;
}

std::optional<u64> Tower::descend(u64 x, int from, int to) const {
    if (from == to) return x;
    const Emb& e = emb(to, from);
    u64 c = 0;
    for (size_t i = 0; i < e.pvec.size(); i++)
        if ((x >> e.pbit[i]) & 1) {
            x ^= e.pvec[i];
            c ^= e.pcomb[i];
        }
    if (x) return std::nullopt;
    return c;
}

int Tower::level_of(u64 x, int d) const {
    for (int e = 1; e <= d; e++)
        if (d % e == 0 && frob(x, d, e) == x) return e;
    return d;
}

u64 Tower::frob(u64 x, int d, int i) const { return F(d).frob2(x, n_ * i); }

u64 Tower::rel_trace(u64 x, int from, int to) const {
    if (from % to) throw std::invalid_argument("trace: level mismatch");
    u64 s = 0, t = x;
    for (int i = 0; i < from / to; i++) {
        s ^= t;
        t = frob(t, from, to);
    }
    return s;
}

u64 Tower::rel_norm(u64 x, int from, int to) const {
    if (from % to) throw std::invalid_argument("norm: level mismatch");
    const Field& D = F(from);
    u64 s = 1, t = x;
    for (int i = 0; i < from / to; i++) {
        s = D.mul(s, t);
        t = frob(t, from, to);
    }
    return s;
}

std::optional<u64> Tower::solve_as(u64 c, int d) const {
    auto r = poly::roots(F(d), Poly{c, 1, 1});
    if (r.empty()) return std::nullopt;
    return r.front();
}

std::optional<u64> Tower::additive_h90(u64 c, int d) const {
    const Field& D = F(d);
    if (rel_trace(c, d, 1) != 0) return std::nullopt;
    // theta with Tr(theta) = 1, then x = sum_i (c + c' + ... + c^(i-1)) theta^(i)
    u64 e = d;
    for (u64 th = 1; th <= D.mask(); th++) {
        u64 t = rel_trace(th, d, 1);
        if (!t) continue;
        u64 theta = D.div(th, t);
        u64 x = 0, partial = 0, ci = c, thi = theta;
        for (u64 i = 1; i < e; i++) {
            partial ^= ci;
            ci = frob(ci, d);
            thi = frob(thi, d);
            x ^= D.mul(partial, thi);
        }
        if ((x ^ frob(x, d)) == c) return x;
        throw std::logic_error("additive Hilbert 90 construction failed");
    }
    return std::nullopt;
}

std::optional<u64> Tower::hilbert90(u64 t, int d) const {
    const Field& D = F(d);
    if (t == 0 || rel_norm(t, d, 1) != 1) return std::nullopt;
    // s = theta + t theta' + t t' theta'' + ...
    for (u64 theta = 1; theta <= D.mask(); theta++) {
        u64 s = 0, coef = 1, th = theta, ti = t;
        for (int i = 0; i < d; i++) {
            s ^= D.mul(coef, th);
            coef = D.mul(coef, ti);
            ti = frob(ti, d);
            th = frob(th, d);
        }
        if (s) return s;
    }
    return std::nullopt;
}

std::string Tower::table() const {
    std::ostringstream os;
    for (auto& [d, f] : fields_) os << f.m() << ":" << std::hex << f.modulus() << std::dec << "\n";
    return os.str();
}

std::map<int, u64> Tower::parse_table(const std::string& text) {
    std::map<int, u64> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        auto c = line.find(':');
        if (c == std::string::npos) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("bad tower table line: " + line);
        }
        int deg = std::stoi(line.substr(0, c));
        u64 f = std::stoull(line.substr(c + 1), nullptr, 16);
        if (bitdeg(f) != deg || !is_irreducible_f2(f)) throw std::invalid_argument("not an irreducible of the stated degree: " + line);
        out[deg] = f;
    }
    return out;
}

}  // namespace binq
