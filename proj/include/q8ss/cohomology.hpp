#pragma once
#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "q8.hpp"
#include "snf.hpp"
#include "stpoly.hpp"
#include "witt.hpp"

namespace q8ss {

// Extra 2-adic precision carried through the Smith pipeline. Genuine torsion
// never exceeds 2^3, elimination residue sits within 3 of the working nil,
// so +6 keeps the two regimes separated and makes reductions to the user
// precision exact.
inline constexpr int kHeadroom = 6;

enum class GroupSel { q8, c4i, c4j, c4k, c2 };

inline std::string group_name(GroupSel g)
{
    switch (g) {
    case GroupSel::q8: return "Q8";
    case GroupSel::c4i: return "C4<i>";
    case GroupSel::c4j: return "C4<j>";
    case GroupSel::c4k: return "C4<k>";
    case GroupSel::c2: return "C2<-1>";
    }
    return "?";
}

inline int group_cosets(GroupSel g)
{
    switch (g) {
    case GroupSel::q8: return 1;
    case GroupSel::c2: return 4;
    default: return 2;
    }
}

inline SubgroupView group_view(GroupSel g)
{
    switch (g) {
    case GroupSel::c4i: return c4_view(kI);
    case GroupSel::c4j: return c4_view(kJ);
    case GroupSel::c4k: return c4_view(kK);
    case GroupSel::c2: return c2_center_view();
    default: break;
    }
    SubgroupView whole;
    whole.reps = {kOne};
    for (int g8 = 0; g8 < 8; ++g8)
        whole.elements.push_back(Q8Elt(g8));
    whole.name = "Q8";
    return whole;
}

// Free rank of the cochain group C^f = Hom(X_f, M) over the basis of M.
inline int cochain_blocks(GroupSel g, int f) { return resolution_rank(f) * group_cosets(g); }

// Matrix of a group-ring element acting on the degree-n forms; column e is
// the image of s^(n-e) t^e.
inline Mat<WRing> action_matrix(const WRing& ring, const GroupRing& r, int n, Sector sector)
{
    Mat<WRing> m(n + 1, n + 1);
    for (int e = 0; e <= n; ++e) {
        StPoly img = act(r, StPoly::monomial(n, e), sector);
        for (int i = 0; i <= n; ++i)
            m.at(i, e) = img.c[size_t(i)].reduced(ring.N);
    }
    return m;
}

// The coefficient module with its eight verified action matrices.
struct CoefficientModule {
    int n = 0;
    Sector sector = Sector::integer;
    int rank = 0;
    std::array<Mat<WRing>, 8> action;

    Mat<WRing> action_of(const WRing& ring, const GroupRing& r) const
    {
        Mat<WRing> m(rank, rank);
        for (int g = 0; g < 8; ++g) {
            if (!r.c[g])
                continue;
            Witt c = Witt(r.c[g]).reduced(ring.N);
            for (int i = 0; i < rank; ++i)
                for (int j = 0; j < rank; ++j)
                    m.at(i, j) = ring.add(m.at(i, j), ring.mul(c, action[g].at(i, j)));
        }
        return m;
    }
};

inline CoefficientModule build_module(const WRing& ring, int n, Sector sector)
{
    assert(n >= 0);
    CoefficientModule M;
    M.n = n;
    M.sector = sector;
    M.rank = n + 1;
    for (int g = 0; g < 8; ++g)
        M.action[size_t(g)] = action_matrix(ring, gr(Q8Elt(g)), n, sector);

    auto equal = [&](const Mat<WRing>& x, const Mat<WRing>& y) {
        for (int i = 0; i < x.rows; ++i)
            for (int j = 0; j < x.cols; ++j)
                if (!ring.is_zero(ring.sub(x.at(i, j), y.at(i, j))))
                    return false;
        return true;
    };
    // the whole multiplication table, which subsumes i^4 = 1, j^2 = i^2
    // and j i j^{-1} = i^{-1}
    for (int g = 0; g < 8; ++g)
        for (int h = 0; h < 8; ++h) {
            auto prod = mat_mul(ring, M.action[size_t(g)], M.action[size_t(h)]);
            if (!equal(prod, M.action[q8_mul(Q8Elt(g), Q8Elt(h))]))
                throw std::runtime_error("coefficient module action violates the group law at n=" + std::to_string(n));
        }
    return M;
}

// Matrix of the cochain differential C^f -> C^{f+1}: for d(x_j) = sum r_ij x_i
// in the resolution, (d c)_j = sum_i r_ij . c_i. Cochain vectors are laid out
// in generator-major blocks of size n+1.
inline Mat<WRing> cochain_matrix(const WRing& ring, GroupSel G, int f, int n, Sector sector)
{
    ChainMatrix d = resolution_differential(f + 1);
    if (G != GroupSel::q8)
        d = restrict_chain(d, group_view(G));
    CoefficientModule M = build_module(ring, n, sector);
    int nb = M.rank;
    Mat<WRing> D(d.cols * nb, d.rows * nb);
    for (int j = 0; j < d.cols; ++j)
        for (int i = 0; i < d.rows; ++i) {
            if (d.at(i, j).is_zero())
                continue;
            auto blk = M.action_of(ring, d.at(i, j));
            for (int r = 0; r < nb; ++r)
                for (int c = 0; c < nb; ++c)
                    D.at(j * nb + r, i * nb + c) = blk.at(r, c);
        }
    return D;
}

inline Mat<F4h> mat_mod2(const F4h& ring1, const Mat<WRing>& m)
{
    Mat<F4h> r(m.rows, m.cols);
    for (size_t t = 0; t < m.a.size(); ++t)
        r.a[t] = ring1.from_f4(witt_mod2(m.a[t]));
    return r;
}

// A computed cohomology group: W/2^e summand orders (descending, e equal to
// the precision meaning free at precision) with generator cochains.
struct CohGroup {
    GroupSel group = GroupSel::q8;
    int f = 0, n = 0;
    Sector sector = Sector::integer;
    int precision = 6;
    std::vector<int> orders;                 // descending
    std::vector<bool> free_summand;          // parallel
    std::vector<std::vector<Witt>> gens;     // reduced mod 2^precision
    std::vector<std::string> alarms;
    std::shared_ptr<Homology<WRing>> hom;    // working-precision internals
    int work = 0;

    size_t size() const { return orders.size(); }
    std::string str() const
    {
        std::string s = "H^" + std::to_string(f) + "(" + group_name(group) + ", pi_" + std::to_string(2 * n) + " " + sector_name(sector) + ") = ";
        if (orders.empty())
            return s + "0";
        for (size_t t = 0; t < orders.size(); ++t)
            s += (t ? " + 2^" : "2^") + std::to_string(orders[t]);
        return s;
    }
};

namespace cohdetail {

struct Key {
    GroupSel g;
    int f, n;
    Sector sec;
    int precision;
    bool operator<(const Key& o) const
    {
        if (g != o.g)
            return g < o.g;
        if (f != o.f)
            return f < o.f;
        if (n != o.n)
            return n < o.n;
        if (sec != o.sec)
            return sec < o.sec;
        return precision < o.precision;
    }
};

// the resolution repeats with period 4 above degree 0, so cochain matrices
// and cohomology depend only on this reduced degree
inline int reduced_degree(int f) { return f == 0 ? 0 : ((f - 1) % 4) + 1; }

} // namespace cohdetail

inline CohGroup cohomology_group(GroupSel G, int f, int n, Sector sector, int precision = 0)
{
    if (precision == 0)
        precision = witt_precision();
    assert(f >= 0 && n >= 0 && precision >= 4);
    cohdetail::Key key{G, cohdetail::reduced_degree(f), n, sector, precision};
    static std::map<cohdetail::Key, CohGroup> cache;
    auto it = cache.find(key);
    if (it == cache.end()) {
        int work = precision + kHeadroom;
        PrecisionScope scope(work);
        WRing ring(work);
        int fr = key.f;
        Mat<WRing> B = cochain_matrix(ring, G, fr, n, sector);
        Mat<WRing> A = (fr == 0) ? Mat<WRing>(B.cols, 0) : cochain_matrix(ring, G, fr - 1, n, sector);
        auto hom = std::make_shared<Homology<WRing>>(homology(ring, B, A));

        CohGroup out;
        out.group = G;
        out.f = fr;
        out.n = n;
        out.sector = sector;
        out.precision = precision;
        out.work = work;
        out.alarms = hom->alarms;
        out.hom = hom;
        // summands in descending order: free first, then decreasing torsion
        std::vector<size_t> idx(hom->orders.size());
        for (size_t t = 0; t < idx.size(); ++t)
            idx[t] = t;
        std::stable_sort(idx.begin(), idx.end(), [&](size_t x, size_t y) {
            int ox = hom->free_summand[x] ? kValInf : hom->orders[x];
            int oy = hom->free_summand[y] ? kValInf : hom->orders[y];
            return ox > oy;
        });
        for (size_t t : idx) {
            bool fr_sum = hom->free_summand[t];
            out.orders.push_back(fr_sum ? precision : hom->orders[t]);
            out.free_summand.push_back(fr_sum);
            std::vector<Witt> gen(size_t(hom->gens.rows));
            for (int i = 0; i < hom->gens.rows; ++i)
                gen[size_t(i)] = hom->gens.at(i, int(t)).reduced(precision);
            out.gens.push_back(std::move(gen));
        }
        it = cache.emplace(key, std::move(out)).first;
    }
    CohGroup g = it->second;
    g.f = f;
    return g;
}

// F4-dimension of the mod-2 cohomology in one bidegree.
inline int cohomology_dim_mod2(GroupSel G, int f, int n, Sector sector)
{
    assert(f >= 0 && n >= 0);
    cohdetail::Key key{G, cohdetail::reduced_degree(f), n, sector, 1};
    static std::map<cohdetail::Key, int> cache;
    auto it = cache.find(key);
    if (it == cache.end()) {
        int work = 10;
        PrecisionScope scope(work);
        WRing ring(work);
        F4h f4(1);
        int fr = key.f;
        Mat<F4h> B = mat_mod2(f4, cochain_matrix(ring, G, fr, n, sector));
        Mat<F4h> A = (fr == 0) ? Mat<F4h>(B.cols, 0)
                               : mat_mod2(f4, cochain_matrix(ring, G, fr - 1, n, sector));
        auto H = homology(f4, B, A, 0);
        it = cache.emplace(key, int(H.orders.size())).first;
    }
    return it->second;
}

// Lattice valuations of the elementary divisors of the degree-f cochain
// differential, for counting orders of the finite-coefficient groups.
inline std::vector<int> cochain_divisors(GroupSel G, int f, int n, Sector sector)
{
    assert(f >= 0 && n >= 0);
    cohdetail::Key key{G, cohdetail::reduced_degree(f), n, sector, -1};
    static std::map<cohdetail::Key, std::vector<int>> cache;
    auto it = cache.find(key);
    if (it == cache.end()) {
        int work = witt_precision() + kHeadroom;
        PrecisionScope scope(work);
        WRing ring(work);
        Mat<WRing> B = cochain_matrix(ring, G, key.f, n, sector);
        auto s = snf(ring, B);
        // pad with nil for the full column count
        while (int(s.divisors.size()) < B.cols)
            s.divisors.push_back(ring.nil_val());
        it = cache.emplace(key, std::move(s.divisors)).first;
    }
    return it->second;
}

// log2 of the order of H^f with coefficients reduced mod 2^K (each Witt
// scalar contributes two copies of Z/2^K): |ker d_f| / |im d_{f-1}| with
// elementary divisors capped at K.
inline int finite_log2_order(GroupSel G, int f, int n, Sector sector, int K)
{
    auto cap = [&](const std::vector<int>& ds) {
        int sum = 0;
        for (int d : ds)
            sum += std::min(d, K);
        return sum;
    };
    auto dB = cochain_divisors(G, f, n, sector);
    int log_ker = cap(dB); // each divisor 2^d contributes 2^min(d,K) kernel elements
    int log_im = 0;
    if (f > 0) {
        auto dA = cochain_divisors(G, f - 1, n, sector);
        for (int d : dA)
            log_im += K - std::min(d, K);
    }
    return 2 * (log_ker - log_im);
}

// Cochain-level restriction: a Q8-cochain c (blocks per resolution
// generator) becomes the subgroup cochain with value rho . c_j on the basis
// element rho x_j.
inline std::vector<Witt> restrict_cochain(GroupSel G, int n, Sector sector, const std::vector<Witt>& c)
{
    assert(G != GroupSel::q8);
    SubgroupView view = group_view(G);
    int nb = n + 1, R = int(view.reps.size());
    int blocks = int(c.size()) / nb;
    assert(int(c.size()) == blocks * nb);
    std::vector<Witt> out(c.size() * size_t(R));
    for (int j = 0; j < blocks; ++j) {
        StPoly p(n);
        for (int e = 0; e <= n; ++e)
            p.c[size_t(e)] = c[size_t(j * nb + e)];
        for (int t = 0; t < R; ++t) {
            StPoly img = act(view.reps[size_t(t)], p, sector);
            for (int e = 0; e <= n; ++e)
                out[size_t((j * R + t) * nb + e)] = img.c[size_t(e)];
        }
    }
    return out;
}

// Cochain-level transfer: (Tr c)(x_j) = sum_t rho_t^{-1} . c(rho_t x_j).
inline std::vector<Witt> transfer_cochain(GroupSel G, int n, Sector sector, const std::vector<Witt>& c)
{
    assert(G != GroupSel::q8);
    SubgroupView view = group_view(G);
    int nb = n + 1, R = int(view.reps.size());
    int blocks = int(c.size()) / (nb * R);
    assert(int(c.size()) == blocks * nb * R);
    std::vector<Witt> out(size_t(blocks * nb));
    for (int j = 0; j < blocks; ++j) {
        StPoly acc(n);
        for (int t = 0; t < R; ++t) {
            StPoly p(n);
            for (int e = 0; e <= n; ++e)
                p.c[size_t(e)] = c[size_t((j * R + t) * nb + e)];
            acc = acc + act(q8_inv(view.reps[size_t(t)]), p, sector);
        }
        for (int e = 0; e <= n; ++e)
            out[size_t(j * nb + e)] = acc.c[size_t(e)];
    }
    return out;
}

// Blockwise multiplication of a cochain by an invariant form; a cochain map
// exactly when p is fixed by the integer-sector action.
inline std::vector<Witt> multiply_cochain(const StPoly& p, int n_src, const std::vector<Witt>& c)
{
    int nb = n_src + 1, nb2 = n_src + p.n + 1;
    int blocks = int(c.size()) / nb;
    assert(int(c.size()) == blocks * nb);
    std::vector<Witt> out(size_t(blocks * nb2));
    for (int j = 0; j < blocks; ++j) {
        StPoly q(n_src);
        for (int e = 0; e <= n_src; ++e)
            q.c[size_t(e)] = c[size_t(j * nb + e)];
        StPoly prod = p * q;
        for (int e = 0; e < nb2; ++e)
            out[size_t(j * nb2 + e)] = prod.c[size_t(e)];
    }
    return out;
}

// The additive norm N(x) = sum over the whole group of g . x.
inline StPoly norm_element(const StPoly& p, Sector sector = Sector::integer)
{
    StPoly r(p.n);
    for (int g = 0; g < 8; ++g)
        r = r + act(Q8Elt(g), p, sector);
    return r;
}

inline Mat<WRing> additive_norm_matrix(const WRing& ring, int n, Sector sector)
{
    return action_matrix(ring, GroupRing::all_elements(), n, sector);
}

// W-matrix of a chain map between free modules over the group ring, in the
// basis {g x_j}: right multiplication by each entry.
inline Mat<WRing> chain_to_wmatrix(const WRing& ring, const ChainMatrix& d)
{
    Mat<WRing> m(8 * d.rows, 8 * d.cols);
    for (int i = 0; i < d.rows; ++i)
        for (int j = 0; j < d.cols; ++j) {
            const GroupRing& r = d.at(i, j);
            if (r.is_zero())
                continue;
            // (h x_j) -> h r x_i: coefficient of g' x_i is r_{h^{-1} g'}
            for (int h = 0; h < 8; ++h)
                for (int gp = 0; gp < 8; ++gp) {
                    int64_t c = r.c[q8_mul(q8_inv(Q8Elt(h)), Q8Elt(gp))];
                    if (c)
                        m.at(i * 8 + gp, j * 8 + h) = ring.make(c, 0);
                }
        }
    return m;
}

// Full report block: the group line followed by one generator per line.
inline std::string coh_report(const CohGroup& g)
{
    std::string s = g.str() + "\n";
    PrecisionScope ps(g.precision);
    for (size_t t = 0; t < g.gens.size(); ++t) {
        s += "  gen order 2^" + std::to_string(g.orders[t]) + (g.free_summand[t] ? " (free)" : "") + " = [";
        for (size_t i = 0; i < g.gens[t].size(); ++i)
            s += (i ? ", " : "") + g.gens[t][i].str();
        s += "]\n";
    }
    for (auto& a : g.alarms)
        s += "  alarm: " + a + "\n";
    return s;
}

} // namespace q8ss
