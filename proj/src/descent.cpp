#include "binq/descent.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "binq/gf2lin.hpp"
#include "binq/quartic.hpp"

namespace binq {

static const Field& f2() {
    static Field F(1, default_modulus(1));
    return F;
}

Quad cocycle_H(const Mat3& M) {
    const Field& F = f2();
    Vec3 l1{M(0, 0), M(0, 1), M(0, 2)}, l2{M(1, 0), M(1, 1), M(1, 2)}, l3{M(2, 0), M(2, 1), M(2, 2)};
    Vec3 s{l1[0] ^ l2[0] ^ l3[0], l1[1] ^ l2[1] ^ l3[1], l1[2] ^ l2[2] ^ l3[2]};
    Form p = form::mul(F, form::mul(F, form::linear(l1), form::linear(l2)),
                       form::mul(F, form::linear(l3), form::linear(s)));
    auto h = quartic_sqrt(F, form::add(p, wall_rhs(7)));
    if (!h) throw std::logic_error("cocycle: difference is not a square");
    return *h;
}

static std::vector<AffineQ> build_twisted_maps() {
    const Field& F = f2();
    const GammaGroup& G = GammaGroup::get();
    std::vector<AffineQ> maps(G.size());
    for (int g = 0; g < G.size(); g++) {
        const Mat3& Mi = G[G.inv(g)];
        AffineQ& A = maps[g];
        for (int i = 0; i < 6; i++) {
            Quad e;
            e[i] = 1;
            Quad img = quad::substitute(F, e, Mi);
            for (int j = 0; j < 6; j++) A.M[j][i] = img[j];
        }
        A.h = cocycle_H(Mi);
    }
    return maps;
}

const AffineQ& twisted_map(int g) {
    static const std::vector<AffineQ> maps = build_twisted_maps();
    return maps.at(g);
}

Quad twisted_act(int g, const Quad& Q) {
    // all entries are 0/1, so no field arithmetic is needed
    const AffineQ& A = twisted_map(g);
    Quad r = A.h;
    for (int j = 0; j < 6; j++)
        for (int i = 0; i < 6; i++)
            if (A.M[j][i]) r[j] ^= Q[i];
    return r;
}

bool nonsingular_split(const Quad& Q) {
    u64 a = Q[0], b = Q[1], c = Q[2], d = Q[3], e = Q[4], f = Q[5];
    return a && b && c && (a ^ b ^ d) && (b ^ c ^ e) && (a ^ c ^ f) && (a ^ b ^ c ^ d ^ e ^ f) != 1;
}

int class_level(int cls) {
    static const std::array<int, 6> lv{1, 2, 3, 4, 7, 7};
    return lv.at(cls);
}

void sort_points(std::vector<Quad>& pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

std::vector<Quad> descent_set(const Tower& T, int cls) {
    int L = class_level(cls);
    const Field& K = T.F(L);
    std::vector<Quad> out;
    auto push = [&](const Quad& Q) {
        if (nonsingular_split(Q)) out.push_back(Q);
    };
    auto fr = [&](u64 x, int i) { return T.frob(x, L, i); };
    u64 q = T.q();
    switch (cls) {
    case GammaGroup::C1: {
        u64 n = 1;
        for (int i = 0; i < 6; i++) n *= q;
        for (u64 code = 0; code < n; code++) {
            Quad Q;
            u64 c = code;
            for (int i = 0; i < 6; i++) Q[i] = c % q, c /= q;
            push(Q);
        }
        break;
    }
    case GammaGroup::C2:
        // (a, a', c, d, e, e'), a, e in k2, c, d in k
        for (u64 a = 0; a <= K.mask(); a++)
            for (u64 e = 0; e <= K.mask(); e++)
                for (u64 c = 0; c < q; c++)
                    for (u64 d = 0; d < q; d++)
                        push(Quad{{a, fr(a, 1), T.embed(c, 1, 2), T.embed(d, 1, 2), e, fr(e, 1)}});
        break;
    case GammaGroup::C3:
        for (u64 a = 0; a <= K.mask(); a++)
            for (u64 d = 0; d <= K.mask(); d++)
                push(Quad{{a, fr(a, 1), fr(a, 2), d, fr(d, 1), fr(d, 2)}});
        break;
    case GammaGroup::C4:
        // (c', b, c, b+c'+c'', b+c+c''', b'+c+c'), c in k4, b in k2
        for (u64 c = 0; c <= K.mask(); c++) {
            u64 c1 = fr(c, 1), c2 = fr(c, 2), c3 = fr(c, 3);
            for (u64 b2 = 0; b2 <= T.F(2).mask(); b2++) {
                u64 b = T.embed(b2, 2, 4), b1 = fr(b, 1);
                push(Quad{{c1, b, c, b ^ c1 ^ c2, b ^ c ^ c3, b1 ^ c ^ c1}});
            }
        }
        break;
    case GammaGroup::C7_0:
    case GammaGroup::C7_1:
        for (u64 b = 0; b <= K.mask(); b++) {
            std::array<u64, 7> bc;
            bc[0] = b;
            for (int i = 1; i < 7; i++) bc[i] = fr(bc[i - 1], 1);
            u64 tr = 0;
            for (u64 x : bc) tr ^= x;
            if (tr != 1) continue;
            if (cls == GammaGroup::C7_0)
                push(Quad{{bc[2], bc[0], bc[1], bc[0] ^ bc[2] ^ bc[3], bc[0] ^ bc[1] ^ bc[5], bc[1] ^ bc[2] ^ bc[6]}});
            else
                push(Quad{{bc[0], bc[1], bc[6], bc[0] ^ bc[1] ^ bc[3], bc[1] ^ bc[5] ^ bc[6], bc[0] ^ bc[2] ^ bc[6]}});
        }
        break;
    default: throw std::out_of_range("class id");
    }
    sort_points(out);
    return out;
}

std::vector<Quad> descent_set_by_solving(const Tower& T, int cls) {
    const GammaGroup& G = GammaGroup::get();
    int L = class_level(cls);
    const Field& K = T.F(L);
    int m = K.m(), N = 6 * m;
    int g = G.rep(cls);
    auto lin = [&](const Quad& Q) {  // linear part of gamma(Q) + sigma(Q)
        Quad r = quad::add(twisted_act(g, Q), twisted_map(g).h);
        for (int i = 0; i < 6; i++) r[i] ^= T.frob(Q[i], L, 1);
        return r;
    };
    auto bits = [&](const Quad& Q) {
        BitVec v(N);
        for (int i = 0; i < 6; i++)
            for (int j = 0; j < m; j++)
                if ((Q[i] >> j) & 1) v.set(i * m + j);
        return v;
    };
    std::vector<BitVec> cols;
    for (int i = 0; i < 6; i++)
        for (int j = 0; j < m; j++) {
            Quad e;
            e[i] = u64(1) << j;
            cols.push_back(bits(lin(e)));
        }
    auto sol = solve_f2(cols, bits(twisted_map(g).h));
    if (!sol) throw std::logic_error("descent system has no solution");
    int k = int(sol->kernel.size());
    if (k > 30) throw std::runtime_error("descent system too large to enumerate");
    auto toQ = [&](const BitVec& v) {
        Quad Q;
        for (int i = 0; i < 6; i++)
            for (int j = 0; j < m; j++)
                if (v.get(i * m + j)) Q[i] |= u64(1) << j;
        return Q;
    };
    std::vector<Quad> out;
    BitVec cur = sol->particular;
    // Gray code walk over the solution space
    for (u64 s = 0; s < (u64(1) << k); s++) {
        if (s) cur ^= sol->kernel[__builtin_ctzll(s)];
        Quad Q = toQ(cur);
        if (nonsingular_split(Q)) out.push_back(Q);
    }
    sort_points(out);
    return out;
}

long long descent_size_formula(int cls, long long q) {
    long long q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q, q6 = q5 * q;
    switch (cls) {
    case GammaGroup::C1: return q6 - 7 * q5 + 21 * q4 - 35 * q3 + 35 * q2 - 21 * q + 7;
    case GammaGroup::C2: return q6 - 3 * q5 + q4 + 5 * q3 - 5 * q2 - q + 3;
    case GammaGroup::C3: return q6 - q5 - 2 * q3 + 2 * q2 + 1;
    case GammaGroup::C4: return q6 - q5 - q4 + q3 - q2 + q + 1;
    case GammaGroup::C7_0:
    case GammaGroup::C7_1: return q6;
    }
    throw std::out_of_range("class id");
}

bool descent_equivalent(const Tower& T, const DescentDatum& a, const DescentDatum& b) {
    const GammaGroup& G = GammaGroup::get();
    if (G.class_of(a.gamma) != G.class_of(b.gamma)) return false;
    int L = std::lcm(a.level, b.level);
    if (!T.has(L)) throw std::invalid_argument("descent data levels have no common field in the tower");
    Quad Qa = quad::embed(T, a.Q, a.level, L), Qb = quad::embed(T, b.Q, b.level, L);
    for (int r = 0; r < G.size(); r++)
        if (G.mul(G.mul(r, a.gamma), G.inv(r)) == b.gamma && twisted_act(r, Qa) == Qb) return true;
    return false;
}

// ---------------------------------------------------------------- group actions

int default_threads() {
    if (const char* e = std::getenv("BINQ_THREADS")) {
        int n = std::atoi(e);
        if (n > 0) return n;
    }
    unsigned h = std::thread::hardware_concurrency();
    return h ? int(h) : 1;
}

void parallel_for(long long n, int threads, const std::function<void(long long, long long, int)>& body) {
    threads = int(std::max<long long>(1, std::min<long long>(threads, std::max<long long>(1, n / 256))));
    if (threads == 1) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex mu;
    for (int t = 0; t < threads; t++) {
        long long lo = n * t / threads, hi = n * (t + 1) / threads;
        pool.emplace_back([&, lo, hi, t] {
            try {
                body(lo, hi, t);
            } catch (...) {
                std::lock_guard<std::mutex> g(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<long long> fixed_point_counts(const GroupAction& A, int threads) {
    std::vector<std::atomic<long long>> cnt(A.order);
    for (auto& c : cnt) c = 0;
    parallel_for((long long)A.points.size(), threads, [&](long long lo, long long hi, int) {
        std::vector<long long> local(A.order, 0);
        for (long long i = lo; i < hi; i++)
            for (int g = 0; g < A.order; g++)
                if (A.act(g, A.points[i]) == A.points[i]) local[g]++;
        for (int g = 0; g < A.order; g++) cnt[g] += local[g];
    });
    std::vector<long long> out(A.order);
    for (int g = 0; g < A.order; g++) out[g] = cnt[g];
    return out;
}

long long burnside_count(const GroupAction& A, int threads) {
    auto fx = fixed_point_counts(A, threads);
    long long s = std::accumulate(fx.begin(), fx.end(), 0LL);
    if (s % A.order) throw std::logic_error("Burnside sum not divisible by the group order: " + A.label);
    return s / A.order;
}

std::vector<Orbit> orbits(const GroupAction& A, int threads) {
    const auto& X = A.points;
    auto find = [&](const Quad& Q) -> long long {
        auto it = std::lower_bound(X.begin(), X.end(), Q);
        if (it == X.end() || *it != Q) return -1;
        return it - X.begin();
    };
    (void)threads;
    std::vector<char> seen(X.size(), 0);
    std::vector<Orbit> out;
    std::vector<long long> stack;
    for (size_t i = 0; i < X.size(); i++) {
        if (seen[i]) continue;
        Orbit o;
        o.rep = X[i];  // points are sorted, so the first unseen one is the least in its orbit
        stack.assign(1, (long long)i);
        seen[i] = 1;
        while (!stack.empty()) {
            long long x = stack.back();
            stack.pop_back();
            o.size++;
            for (int g = 0; g < A.order; g++) {
                Quad y = A.act(g, X[x]);
                long long j = find(y);
                if (j < 0) throw std::logic_error("action leaves the point set: " + A.label);
                if (!seen[j]) seen[j] = 1, stack.push_back(j);
                if (x == (long long)i && j == x) o.stab.push_back(g);
            }
        }
        o.stabilizer = (long long)o.stab.size();
        if (o.size * o.stabilizer != A.order) throw std::logic_error("orbit-stabilizer mismatch: " + A.label);
        out.push_back(std::move(o));
    }
    return out;
}

GroupAction descent_action(const Tower& T, int cls) {
    const GammaGroup& G = GammaGroup::get();
    auto cent = G.centralizer(G.rep(cls));
    GroupAction A;
    A.label = GammaGroup::class_name(cls);
    A.order = int(cent.size());
    A.points = descent_set(T, cls);
    A.act = [cent](int i, const Quad& Q) { return twisted_act(cent[i], Q); };
    return A;
}

std::string structure_name(const std::vector<int>& ord) {
    int n = int(ord.size());
    std::map<int, int> c;
    for (int o : ord) c[o]++;
    auto has = [&](int o) { return c.count(o) ? c[o] : 0; };
    if (n == 1) return "1";
    if (has(n)) return "C" + std::to_string(n);
    // the nonabelian ones that occur
    if (n == 6 && !has(6)) return "S3";
    if (n == 8 && has(2) == 5 && has(4) == 2) return "D8";
    if (n == 8 && has(2) == 1 && has(4) == 6) return "Q8";
    // otherwise read off abelian invariants prime by prime
    std::string out;
    int rest = n;
    for (int p = 2; rest > 1; p++) {
        if (rest % p) continue;
        int m = 0;
        while (rest % p == 0) rest /= p, m++;
        // log_p #{x : x^(p^j) = 1, order a p-power}
        std::vector<int> lg(m + 2, 0);
        for (int j = 1; j <= m + 1; j++) {
            long long pj = 1, cnt = 0;
            for (int i = 0; i < j; i++) pj *= p;
            for (auto [o, k] : c) {
                int t = o;
                while (t % p == 0) t /= p;
                if (t == 1 && pj % o == 0) cnt += k;
            }
            int e = 0;
            long long v = 1;
            while (v < cnt) v *= p, e++;
            if (v != cnt) return "order" + std::to_string(n);
            lg[j] = e;
        }
        if (lg[m + 1] != m) return "order" + std::to_string(n);
        std::vector<int> d(m + 3, 0);
        for (int j = 1; j <= m + 1; j++) d[j] = lg[j] - lg[j - 1];
        for (int j = 1; j <= m; j++) {
            int mult = d[j] - d[j + 1];
            if (mult <= 0) continue;
            long long pj = 1;
            for (int i = 0; i < j; i++) pj *= p;
            if (!out.empty()) out += "x";
            out += "C" + std::to_string(pj);
            if (mult > 1) out += "^" + std::to_string(mult);
        }
    }
    return out;
}

std::vector<std::string> to_hex(const Quad& Q) {
    std::vector<std::string> r;
    for (u64 x : Q.v) {
        std::ostringstream os;
        os << std::hex << x;
        r.push_back(os.str());
    }
    return r;
}

std::string orbit_report_json(const std::string& gamma, const Orbit& o) {
    nlohmann::ordered_json j;
    j["gamma"] = gamma;
    j["representative"] = to_hex(o.rep);
    j["orbit_size"] = o.size;
    j["stabilizer_order"] = o.stabilizer;
    return j.dump();
}

}  // namespace binq
