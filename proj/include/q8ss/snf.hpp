#pragma once
#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "witt.hpp"

namespace q8ss {

// Scalar rings for the Smith pipeline. All three are local chain rings
// (ideals linearly ordered, generated by powers of the uniformizer), which is
// exactly what makes pivoting on a minimal-valuation entry always succeed:
//   Z2k  = Z/2^N,          uniformizer 2
//   WRing = W(F4)/2^N,     uniformizer 2, residue field F4
//   F4h  = F4[h0]/h0^K,    uniformizer h0
// A ring reports nil_val(): the valuation at which elements vanish.

struct Z2k {
    int N;
    using Elem = int64_t;
    explicit Z2k(int n) : N(n) {}
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(int64_t v) const { return mod2k(v, N); }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const { return mod2k(a + b, N); }
    Elem sub(Elem a, Elem b) const { return mod2k(a - b, N); }
    Elem neg(Elem a) const { return mod2k(-a, N); }
    Elem mul(Elem a, Elem b) const { return mod2k(a * b, N); }
    int val(Elem a) const { return val2_int(a, N); }
    int nil_val() const { return N; }
    Elem unit_inverse(Elem a) const { return inv_odd(a, N); }
    Elem shift(Elem a, int k) const { return mod2k(a << k, N); }
    // exact division, requires val(a) >= val(b)
    Elem div(Elem a, Elem b) const
    {
        int v = val(b);
        assert(val(a) >= v);
        if (is_zero(a))
            return 0;
        return mod2k((a >> v) * unit_inverse(b >> v), N);
    }
    std::string str(Elem a) const { return std::to_string(a); }
};

struct WRing {
    int N;
    using Elem = Witt;
    explicit WRing(int n) : N(n) {}
    Elem zero() const { return Elem{}; }
    Elem one() const { return make(1, 0); }
    Elem make(int64_t a, int64_t b) const
    {
        Elem e;
        e.a = mod2k(a, N);
        e.b = mod2k(b, N);
        return e;
    }
    bool is_zero(Elem x) const { return x.a == 0 && x.b == 0; }
    Elem add(Elem x, Elem y) const { return make(x.a + y.a, x.b + y.b); }
    Elem sub(Elem x, Elem y) const { return make(x.a - y.a, x.b - y.b); }
    Elem neg(Elem x) const { return make(-x.a, -x.b); }
    Elem mul(Elem x, Elem y) const
    {
        return make(x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b);
    }
    int val(Elem x) const
    {
        int va = val2_int(x.a, N), vb = val2_int(x.b, N);
        return va < vb ? va : vb;
    }
    int nil_val() const { return N; }
    Elem unit_inverse(Elem x) const
    {
        int64_t nrm = mod2k(x.a * x.a - x.a * x.b + x.b * x.b, N);
        int64_t ni = inv_odd(nrm, N);
        return make((x.a - x.b) * ni, -x.b * ni);
    }
    Elem shift(Elem x, int k) const { return make(x.a << k, x.b << k); }
    Elem div(Elem x, Elem y) const
    {
        int v = val(y);
        assert(val(x) >= v);
        if (is_zero(x))
            return zero();
        Elem yu = make(y.a >> v, y.b >> v);
        Elem q = mul(x, unit_inverse(yu));
        assert(mod2k(q.a, v) == 0 && mod2k(q.b, v) == 0);
        return make(q.a >> v, q.b >> v);
    }
    std::string str(Elem x) const
    {
        PrecisionScope ps(N);
        return x.str();
    }
};

// Truncated polynomial ring F4[h0]/(h0^K), two bits per coefficient, K <= 31.
struct F4h {
    int K;
    using Elem = uint64_t;
    explicit F4h(int k) : K(k) { assert(k >= 1 && k <= 31); }
    uint64_t mask() const { return (K >= 32) ? ~uint64_t(0) : ((uint64_t(1) << (2 * K)) - 1); }
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_f4(F4 c, int t = 0) const { return (uint64_t(c.v) << (2 * t)) & mask(); }
    F4 coeff(Elem a, int t) const { return F4(uint8_t((a >> (2 * t)) & 3)); }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const { return a ^ b; }
    Elem sub(Elem a, Elem b) const { return a ^ b; }
    Elem neg(Elem a) const { return a; }
    Elem mul(Elem a, Elem b) const
    {
        Elem r = 0;
        for (int s = 0; s < K && (a >> (2 * s)); ++s) {
            F4 ca = coeff(a, s);
            if (ca.is_zero())
                continue;
            for (int t = 0; s + t < K; ++t) {
                F4 cb = coeff(b, t);
                if (cb.is_zero())
                    continue;
                r ^= uint64_t((ca * cb).v) << (2 * (s + t));
            }
        }
        return r & mask();
    }
    int val(Elem a) const
    {
        if (a == 0)
            return kValInf;
        int v = 0;
        while (((a >> (2 * v)) & 3) == 0)
            ++v;
        return v;
    }
    int nil_val() const { return K; }
    Elem unit_inverse(Elem a) const
    {
        // term-by-term power series inversion
        F4 lead = coeff(a, 0);
        assert(!lead.is_zero());
        F4 li = lead.inverse();
        Elem r = from_f4(li, 0);
        for (int t = 1; t < K; ++t) {
            F4 acc;
            for (int s = 0; s < t; ++s)
                acc += coeff(r, s) * coeff(a, t - s);
            r ^= uint64_t((li * acc).v) << (2 * t);
        }
        assert(mul(a, r) == one());
        return r;
    }
    Elem shift(Elem a, int k) const { return (a << (2 * k)) & mask(); }
    Elem div(Elem a, Elem b) const
    {
        int v = val(b);
        assert(val(a) >= v);
        if (a == 0)
            return 0;
        Elem bu = b >> (2 * v);
        Elem q = mul(a, unit_inverse(bu));
        assert((q & ((uint64_t(1) << (2 * v)) - 1)) == 0);
        return q >> (2 * v);
    }
    std::string str(Elem a) const
    {
        std::string s;
        for (int t = 0; t < K; ++t) {
            F4 c = coeff(a, t);
            if (c.is_zero())
                continue;
            if (!s.empty())
                s += "+";
            s += (t == 0)        ? c.str()
                 : (c == F4(1)) ? ""
                                : "(" + c.str() + ")*";
            if (t == 1)
                s += "h0";
            else if (t > 1)
                s += "h0^" + std::to_string(t);
        }
        return s.empty() ? "0" : s;
    }
};

template <class R>
struct Mat {
    using Elem = typename R::Elem;
    int rows = 0, cols = 0;
    std::vector<Elem> a;
    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * size_t(c)) {}
    Elem& at(int i, int j) { return a[size_t(i) * cols + j]; }
    const Elem& at(int i, int j) const { return a[size_t(i) * cols + j]; }
    static Mat identity(const R& ring, int n)
    {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            m.at(i, i) = ring.one();
        return m;
    }
};

template <class R>
Mat<R> mat_mul(const R& ring, const Mat<R>& x, const Mat<R>& y)
{
    assert(x.cols == y.rows);
    Mat<R> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            auto xv = x.at(i, k);
            if (ring.is_zero(xv))
                continue;
            for (int j = 0; j < y.cols; ++j) {
                auto yv = y.at(k, j);
                if (!ring.is_zero(yv))
                    r.at(i, j) = ring.add(r.at(i, j), ring.mul(xv, yv));
            }
        }
    return r;
}

template <class R>
std::vector<typename R::Elem> mat_apply(const R& ring, const Mat<R>& m, const std::vector<typename R::Elem>& v)
{
    assert(int(v.size()) == m.cols);
    std::vector<typename R::Elem> r(size_t(m.rows), ring.zero());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (!ring.is_zero(m.at(i, j)) && !ring.is_zero(v[size_t(j)]))
                r[size_t(i)] = ring.add(r[size_t(i)], ring.mul(m.at(i, j), v[size_t(j)]));
    return r;
}

template <class R>
struct SnfResult {
    std::vector<int> divisors; // valuation of each diagonal entry, ascending; nil_val() for zero
    int rank = 0;              // entries with divisor < nil_val()
    Mat<R> V, Vinv, U, Uinv;   // U A V = diag; filled per request flags
};

struct SnfWant {
    bool V = false, Vinv = false, U = false, Uinv = false;
};

// Smith normal form over a local chain ring by minimal-valuation pivoting.
// Deterministic: pivot is the lexicographically first entry of minimal
// valuation in the remaining block. Diagonal entries are normalized to
// uniformizer powers, so divisors are exactly their valuations.
template <class R>
SnfResult<R> snf(const R& ring, Mat<R> A, SnfWant want = {})
{
    using Elem = typename R::Elem;
    SnfResult<R> res;
    int n = A.rows, m = A.cols;
    if (want.V)
        res.V = Mat<R>::identity(ring, m);
    if (want.Vinv)
        res.Vinv = Mat<R>::identity(ring, m);
    if (want.U)
        res.U = Mat<R>::identity(ring, n);
    if (want.Uinv)
        res.Uinv = Mat<R>::identity(ring, n);

    auto swap_rows = [&](int r1, int r2) {
        if (r1 == r2)
            return;
        for (int j = 0; j < m; ++j)
            std::swap(A.at(r1, j), A.at(r2, j));
        if (want.U)
            for (int j = 0; j < n; ++j)
                std::swap(res.U.at(r1, j), res.U.at(r2, j));
        if (want.Uinv)
            for (int i = 0; i < n; ++i)
                std::swap(res.Uinv.at(i, r1), res.Uinv.at(i, r2));
    };
    auto swap_cols = [&](int c1, int c2) {
        if (c1 == c2)
            return;
        for (int i = 0; i < n; ++i)
            std::swap(A.at(i, c1), A.at(i, c2));
        if (want.V)
            for (int i = 0; i < m; ++i)
                std::swap(res.V.at(i, c1), res.V.at(i, c2));
        if (want.Vinv)
            for (int j = 0; j < m; ++j)
                std::swap(res.Vinv.at(c1, j), res.Vinv.at(c2, j));
    };
    // row[r] -= q * row[p]
    auto row_sub = [&](int r, Elem q, int p) {
        for (int j = 0; j < m; ++j)
            if (!ring.is_zero(A.at(p, j)))
                A.at(r, j) = ring.sub(A.at(r, j), ring.mul(q, A.at(p, j)));
        if (want.U)
            for (int j = 0; j < n; ++j)
                if (!ring.is_zero(res.U.at(p, j)))
                    res.U.at(r, j) = ring.sub(res.U.at(r, j), ring.mul(q, res.U.at(p, j)));
        if (want.Uinv) // inverse op: col p += q * col r
            for (int i = 0; i < n; ++i)
                if (!ring.is_zero(res.Uinv.at(i, r)))
                    res.Uinv.at(i, p) = ring.add(res.Uinv.at(i, p), ring.mul(res.Uinv.at(i, r), q));
    };
    // col[c] -= q * col[p]
    auto col_sub = [&](int c, Elem q, int p) {
        for (int i = 0; i < n; ++i)
            if (!ring.is_zero(A.at(i, p)))
                A.at(i, c) = ring.sub(A.at(i, c), ring.mul(A.at(i, p), q));
        if (want.V)
            for (int i = 0; i < m; ++i)
                if (!ring.is_zero(res.V.at(i, p)))
                    res.V.at(i, c) = ring.sub(res.V.at(i, c), ring.mul(res.V.at(i, p), q));
        if (want.Vinv) // inverse op: row p += q * row c
            for (int j = 0; j < m; ++j)
                if (!ring.is_zero(res.Vinv.at(c, j)))
                    res.Vinv.at(p, j) = ring.add(res.Vinv.at(p, j), ring.mul(q, res.Vinv.at(c, j)));
    };
    // col[c] *= u (u a unit)
    auto col_scale = [&](int c, Elem u) {
        for (int i = 0; i < n; ++i)
            A.at(i, c) = ring.mul(A.at(i, c), u);
        if (want.V)
            for (int i = 0; i < m; ++i)
                res.V.at(i, c) = ring.mul(res.V.at(i, c), u);
        if (want.Vinv) {
            Elem ui = ring.unit_inverse(u);
            for (int j = 0; j < m; ++j)
                res.Vinv.at(c, j) = ring.mul(ui, res.Vinv.at(c, j));
        }
    };

    int steps = std::min(n, m);
    int p = 0;
    for (; p < steps; ++p) {
        int bi = -1, bj = -1, bv = ring.nil_val();
        for (int i = p; i < n; ++i)
            for (int j = p; j < m; ++j) {
                int v = ring.val(A.at(i, j));
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0)
            break; // remaining block is zero
        swap_rows(p, bi);
        swap_cols(p, bj);
        Elem piv = A.at(p, p);
        for (int i = p + 1; i < n; ++i)
            if (!ring.is_zero(A.at(i, p)))
                row_sub(i, ring.div(A.at(i, p), piv), p);
        for (int j = p + 1; j < m; ++j)
            if (!ring.is_zero(A.at(p, j)))
                col_sub(j, ring.div(A.at(p, j), piv), p);
        // normalize pivot to a uniformizer power
        int v = ring.val(piv);
        Elem unit_part = ring.div(piv, ring.shift(ring.one(), v));
        col_scale(p, ring.unit_inverse(unit_part));
        assert(ring.val(A.at(p, p)) == v);
        res.divisors.push_back(v);
        ++res.rank;
    }
    for (int t = p; t < steps; ++t)
        res.divisors.push_back(ring.nil_val());
    return res;
}

// Homology ker(B)/im(A) at the middle of  C_in --A--> C --B--> C_out  over a
// local chain ring, with generator vectors and a coordinate map. Divisors in
// (torsion_max, free_floor) are recorded as precision alarms: genuine torsion
// in this engine never exceeds 2^3 (or h0^3), anything between is elimination
// residue and means the headroom was too small.
template <class R>
struct Homology {
    int ambient_dim = 0;
    int kernel_dim = 0;
    std::vector<int> orders;              // valuations e, one per surviving summand (e >= 1)
    std::vector<bool> free_summand;       // parallel to orders
    Mat<R> gens;                          // ambient column vectors, one per summand
    std::vector<std::string> alarms;

    // internals for coordinate evaluation
    Mat<R> kernel_basis;   // ambient x kernel_dim
    Mat<R> kernel_coords;  // kernel_dim x ambient (rows of first Vinv)
    Mat<R> u2;             // second SNF row transform
    std::vector<int> summand_index; // kernel coordinate -> summand position or -1
    std::vector<int> all_divisors;  // second-stage divisor per kernel coordinate

    bool in_kernel(const R& ring, const std::vector<typename R::Elem>& z, int slack = 3) const;
    std::vector<typename R::Elem> coords(const R& ring, const std::vector<typename R::Elem>& z) const;
};

template <class R>
Homology<R> homology(const R& ring, const Mat<R>& B, const Mat<R>& A, int torsion_max = 3)
{
    Homology<R> H;
    H.ambient_dim = B.cols;
    assert(A.rows == B.cols || A.cols == 0);
    const int nil = ring.nil_val();
    const int free_floor = nil - torsion_max;

    SnfWant wantB;
    wantB.V = wantB.Vinv = true;
    auto sB = snf(ring, B, wantB);

    std::vector<int> kernel_pos;
    for (int j = 0; j < B.cols; ++j) {
        int dv = (j < int(sB.divisors.size())) ? sB.divisors[size_t(j)] : nil;
        if (dv >= nil)
            kernel_pos.push_back(j);
        else if (dv > torsion_max) {
            if (dv >= free_floor)
                H.alarms.push_back("outgoing divisor in ghost zone: 2^" + std::to_string(dv));
            else
                H.alarms.push_back("outgoing divisor exceeds torsion bound: 2^" + std::to_string(dv));
            // treated as a rank direction, honestly flagged above
        }
    }
    H.kernel_dim = int(kernel_pos.size());

    H.kernel_basis = Mat<R>(B.cols, H.kernel_dim);
    for (int k = 0; k < H.kernel_dim; ++k)
        for (int i = 0; i < B.cols; ++i)
            H.kernel_basis.at(i, k) = sB.V.at(i, kernel_pos[size_t(k)]);
    H.kernel_coords = Mat<R>(H.kernel_dim, B.cols);
    for (int k = 0; k < H.kernel_dim; ++k)
        for (int j = 0; j < B.cols; ++j)
            H.kernel_coords.at(k, j) = sB.Vinv.at(kernel_pos[size_t(k)], j);

    // incoming map in kernel coordinates
    int acols = A.cols;
    Mat<R> M2(H.kernel_dim, acols);
    if (acols > 0) {
        Mat<R> full = mat_mul(ring, sB.Vinv, A);
        for (int k = 0; k < H.kernel_dim; ++k)
            for (int j = 0; j < acols; ++j)
                M2.at(k, j) = full.at(kernel_pos[size_t(k)], j);
        // sanity: non-kernel coordinates of boundaries sit above the ghost floor
        for (int i = 0; i < B.cols; ++i) {
            bool is_k = false;
            for (int k : kernel_pos)
                if (k == i)
                    is_k = true;
            if (is_k)
                continue;
            for (int j = 0; j < acols; ++j) {
                int v = ring.val(full.at(i, j));
                if (v < free_floor)
                    H.alarms.push_back("boundary leaks outside the kernel at valuation 2^" + std::to_string(v));
            }
        }
    }

    SnfWant want2;
    want2.U = want2.Uinv = true;
    auto s2 = snf(ring, M2, want2);
    H.u2 = s2.U;

    H.all_divisors.assign(size_t(H.kernel_dim), nil);
    for (int k = 0; k < H.kernel_dim && k < int(s2.divisors.size()); ++k)
        H.all_divisors[size_t(k)] = s2.divisors[size_t(k)];

    Mat<R> gen_full = (H.kernel_dim > 0 && acols > 0)
                          ? mat_mul(ring, H.kernel_basis, s2.Uinv)
                          : H.kernel_basis;
    H.summand_index.assign(size_t(H.kernel_dim), -1);
    std::vector<int> keep;
    for (int k = 0; k < H.kernel_dim; ++k) {
        int e = H.all_divisors[size_t(k)];
        if (e == 0)
            continue; // killed by a unit divisor
        bool fr = e >= free_floor;
        if (e > torsion_max && e < free_floor)
            H.alarms.push_back("homology divisor in ghost zone: 2^" + std::to_string(e));
        H.summand_index[size_t(k)] = int(keep.size());
        keep.push_back(k);
        H.orders.push_back(fr ? nil : e);
        H.free_summand.push_back(fr);
    }
    H.gens = Mat<R>(H.ambient_dim, int(keep.size()));
    for (size_t c = 0; c < keep.size(); ++c)
        for (int i = 0; i < H.ambient_dim; ++i)
            H.gens.at(i, int(c)) = gen_full.at(i, keep[c]);
    return H;
}

template <class R>
bool Homology<R>::in_kernel(const R& ring, const std::vector<typename R::Elem>& z, int slack) const
{
    // z lies in the kernel iff reconstructing it from kernel coordinates
    // reproduces it (up to the ghost floor)
    auto w = mat_apply(ring, kernel_coords, z);
    auto back = mat_apply(ring, kernel_basis, w);
    for (size_t i = 0; i < z.size(); ++i)
        if (ring.val(ring.sub(z[i], back[i])) < ring.nil_val() - slack)
            return false;
    return true;
}

template <class R>
std::vector<typename R::Elem> Homology<R>::coords(const R& ring, const std::vector<typename R::Elem>& z) const
{
    auto w = mat_apply(ring, kernel_coords, z);
    auto y = mat_apply(ring, u2, w);
    std::vector<typename R::Elem> out(orders.size(), ring.zero());
    for (int k = 0; k < kernel_dim; ++k)
        if (summand_index[size_t(k)] >= 0)
            out[size_t(summand_index[size_t(k)])] = y[size_t(k)];
    return out;
}

} // namespace q8ss
