#pragma once
#include <cassert>
#include <string>
#include <vector>

#include "q8.hpp"
#include "witt.hpp"

namespace q8ss {

// Homogeneous degree-n form in the basis (s, t) of the topological degree-2
// part; c[e] is the coefficient of s^(n-e) t^e. The change of basis to the
// ring generators is v1 = (z^2 - z) s + t, u^{-1} = t.
struct StPoly {
    int n = 0;
    std::vector<Witt> c;

    StPoly() = default;
    explicit StPoly(int deg) : n(deg), c(size_t(deg) + 1) {}

    static StPoly monomial(int deg, int t_exp, Witt coeff = Witt(1))
    {
        StPoly p(deg);
        p.c[size_t(t_exp)] = coeff;
        return p;
    }

    bool is_zero() const
    {
        for (auto& w : c)
            if (!w.is_zero())
                return false;
        return true;
    }

    friend StPoly operator+(const StPoly& x, const StPoly& y)
    {
        assert(x.n == y.n);
        StPoly r(x.n);
        for (size_t e = 0; e < r.c.size(); ++e)
            r.c[e] = x.c[e] + y.c[e];
        return r;
    }
    friend StPoly operator-(const StPoly& x, const StPoly& y)
    {
        assert(x.n == y.n);
        StPoly r(x.n);
        for (size_t e = 0; e < r.c.size(); ++e)
            r.c[e] = x.c[e] - y.c[e];
        return r;
    }
    friend StPoly operator*(const Witt& w, const StPoly& x)
    {
        StPoly r(x.n);
        for (size_t e = 0; e < r.c.size(); ++e)
            r.c[e] = w * x.c[e];
        return r;
    }
    friend StPoly operator*(const StPoly& x, const StPoly& y)
    {
        StPoly r(x.n + y.n);
        for (size_t e = 0; e < x.c.size(); ++e) {
            if (x.c[e].is_zero())
                continue;
            for (size_t f = 0; f < y.c.size(); ++f)
                r.c[e + f] += x.c[e] * y.c[f];
        }
        return r;
    }
    friend bool operator==(const StPoly& x, const StPoly& y)
    {
        if (x.n != y.n)
            return false;
        for (size_t e = 0; e < x.c.size(); ++e)
            if (x.c[e] != y.c[e])
                return false;
        return true;
    }

    std::string str() const
    {
        std::string out;
        for (size_t e = 0; e < c.size(); ++e) {
            if (c[e].is_zero())
                continue;
            if (!out.empty())
                out += " + ";
            std::string coeff = c[e].str();
            int se = n - int(e), te = int(e);
            std::string mono;
            if (se > 0)
                mono += "s" + (se > 1 ? "^" + std::to_string(se) : "");
            if (te > 0)
                mono += (mono.empty() ? "" : "*") + std::string("t") + (te > 1 ? "^" + std::to_string(te) : "");
            if (mono.empty())
                out += coeff;
            else if (coeff == "1")
                out += mono;
            else if (coeff == "-1")
                out += "-" + mono;
            else
                out += "(" + coeff + ")*" + mono;
        }
        return out.empty() ? "0" : out;
    }
};

// Substitute s -> as*s + bs*t, t -> at*s + bt*t.
inline StPoly subst(const StPoly& p, Witt as, Witt bs, Witt at, Witt bt)
{
    StPoly r(p.n);
    // power tables of the two images
    std::vector<StPoly> pow_s(size_t(p.n) + 1), pow_t(size_t(p.n) + 1);
    pow_s[0] = StPoly::monomial(0, 0);
    pow_t[0] = StPoly::monomial(0, 0);
    StPoly img_s(1), img_t(1);
    img_s.c[0] = as;
    img_s.c[1] = bs;
    img_t.c[0] = at;
    img_t.c[1] = bt;
    for (int m = 1; m <= p.n; ++m) {
        pow_s[size_t(m)] = pow_s[size_t(m) - 1] * img_s;
        pow_t[size_t(m)] = pow_t[size_t(m) - 1] * img_t;
    }
    for (size_t e = 0; e < p.c.size(); ++e) {
        if (p.c[e].is_zero())
            continue;
        StPoly term = pow_s[p.c.size() - 1 - e] * pow_t[e];
        r = r + p.c[e] * term;
    }
    return r;
}

// 2x2 action matrices on (s, t); columns are the images of s and t, so that
// act(g, s) = m[0][0] s + m[1][0] t and matrices compose as M_gh = M_g M_h.
struct ActMat {
    Witt m[2][2];
};

inline ActMat act_mat_mul(const ActMat& x, const ActMat& y)
{
    ActMat r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = x.m[i][0] * y.m[0][j] + x.m[i][1] * y.m[1][j];
    return r;
}

// Built fresh per call so that the entries match the current precision.
inline std::array<ActMat, 8> q8_st_matrices()
{
    Witt z = Witt::zeta(), z2 = z * z, one(1);
    std::array<ActMat, 8> M;
    std::array<bool, 8> have{};
    ActMat id{{{one, Witt()}, {Witt(), one}}};
    ActMat mi{{{Witt(), one}, {-one, Witt()}}};   // s -> -t, t -> s
    ActMat mj{{{-z2, z}, {z, z2}}};               // s -> -z^2 s + z t, t -> z s + z^2 t
    M[kOne] = id;
    M[kI] = mi;
    M[kJ] = mj;
    have[kOne] = have[kI] = have[kJ] = true;
    // close under left multiplication by i and j
    bool grew = true;
    while (grew) {
        grew = false;
        for (int g = 0; g < 8; ++g) {
            if (!have[g])
                continue;
            for (Q8Elt gen : {kI, kJ}) {
                Q8Elt h = q8_mul(gen, Q8Elt(g));
                if (!have[h]) {
                    M[h] = act_mat_mul(M[gen], M[g]);
                    have[h] = true;
                    grew = true;
                }
            }
        }
    }
    for (bool b : have) {
        assert(b);
        (void)b;
    }
    return M;
}

inline const ActMat& q8_st_matrix(Q8Elt g)
{
    // cache keyed by precision; rebuilt when a scope changes it
    static int cached_n = -1;
    static std::array<ActMat, 8> M;
    if (cached_n != witt_precision()) {
        M = q8_st_matrices();
        cached_n = witt_precision();
    }
    return M[g];
}

inline StPoly act(Q8Elt g, const StPoly& p, Sector sector = Sector::integer)
{
    const ActMat& m = q8_st_matrix(g);
    StPoly r = subst(p, m.m[0][0], m.m[1][0], m.m[0][1], m.m[1][1]);
    if (sector_sign(sector, g) < 0)
        r = -Witt(1) * r;
    return r;
}

inline StPoly act(const GroupRing& x, const StPoly& p, Sector sector = Sector::integer)
{
    StPoly r(p.n);
    for (int g = 0; g < 8; ++g)
        if (x.c[g])
            r = r + Witt(x.c[g]) * act(Q8Elt(g), p, sector);
    return r;
}

// u^{-1} = t and its degree-1 partner s = i(u^{-1}).
inline StPoly class_u_inv() { return StPoly::monomial(1, 1); }
inline StPoly class_s() { return StPoly::monomial(1, 0); }

inline StPoly class_v1()
{
    // v1 = (z^2 - z) s + t
    StPoly p(1);
    p.c[0] = zeta2_minus_zeta();
    p.c[1] = Witt(1);
    return p;
}

// D = prod over coset reps of C2 in Q8 of g(u^{-1}); degree 8, Q8-invariant.
inline StPoly class_D()
{
    StPoly t = class_u_inv();
    StPoly d = t;
    for (Q8Elt g : {kI, kJ, kK})
        d = d * act(g, t);
    return d;
}

// Invariant-ring generators.  b2, b4, delta generate the C4<i>-invariants
// with b4^2 = b2^2 delta - 4 delta^2; s1, s2, s3 generate the Q8-invariants
// with s1^3 = 4(2z+1) s1^2 s2 + 16 s1 s2^2.  Note s2 == class_D().
inline StPoly class_b2()
{
    StPoly s = class_s(), t = class_u_inv();
    return s * s + t * t;
}

inline StPoly class_b4()
{
    StPoly s = class_s(), t = class_u_inv();
    return s * s * s * t - s * t * t * t;
}

inline StPoly class_delta()
{
    StPoly s = class_s(), t = class_u_inv();
    return s * s * t * t;
}

inline StPoly class_s1()
{
    StPoly b2 = class_b2();
    return b2 * b2;
}

inline StPoly class_s2()
{
    return class_b4() + Witt(1, 2) * class_delta();
}

inline StPoly class_s3()
{
    StPoly b2 = class_b2();
    return b2 * b2 * b2 + Witt(2, 4) * class_b4() * b2 + Witt(-8) * b2 * class_delta();
}

// Monomial v1^a u^{-b} expanded in the (s, t) basis.
inline StPoly v1u_monomial(int a, int b)
{
    StPoly r = StPoly::monomial(0, 0);
    StPoly v1 = class_v1(), t = class_u_inv();
    for (int e = 0; e < a; ++e)
        r = r * v1;
    for (int e = 0; e < b; ++e)
        r = r * t;
    return r;
}

// Coordinates of p in the basis v1^(n-e) u^(-e), index e; inverts the
// triangular change of basis s = (v1 - u^{-1})/(z^2 - z), t = u^{-1}.
inline std::vector<Witt> to_v1u_coords(const StPoly& p)
{
    Witt inv = zeta2_minus_zeta().inverse();
    // substitute s -> inv*(V - U), t -> U in formal variables (V, U)
    StPoly q = subst(p, inv, -inv, Witt(0), Witt(1));
    // q's "s" slot now carries the v1-exponent
    std::vector<Witt> out(q.c.size());
    for (size_t e = 0; e < q.c.size(); ++e)
        out[e] = q.c[e];
    return out;
}

inline std::vector<F4> mod2(const StPoly& p)
{
    std::vector<F4> r(p.c.size());
    for (size_t e = 0; e < p.c.size(); ++e)
        r[e] = witt_mod2(p.c[e]);
    return r;
}

inline StPoly operator-(const StPoly& x) { return -Witt(1) * x; }

} // namespace q8ss
