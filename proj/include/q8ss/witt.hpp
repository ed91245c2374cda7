#pragma once
#include <cassert>
#include <cstdint>
#include <string>

namespace q8ss {

// Truncated Witt vectors of F4: elements a + b*zeta with zeta^2 = -1 - zeta
// and a, b in Z/2^N. The precision N is process-global; stages that need
// headroom (the Smith pipeline) push a larger N for the duration of a scope.
// Single-threaded by design, matching the sequential orchestration.
inline int& witt_precision()
{
    static int N = 6;
    return N;
}

struct PrecisionScope {
    int saved;
    explicit PrecisionScope(int n) : saved(witt_precision()) { witt_precision() = n; }
    ~PrecisionScope() { witt_precision() = saved; }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;
};

// Large sentinel for the valuation of 0, safely addable.
inline constexpr int kValInf = 1 << 20;

inline int64_t mod2k(int64_t x, int n)
{
    uint64_t mask = (n >= 63) ? ~uint64_t(0) : ((uint64_t(1) << n) - 1);
    return int64_t(uint64_t(x) & mask);
}

inline int val2_int(int64_t x, int n)
{
    x = mod2k(x, n);
    if (x == 0)
        return kValInf;
    int v = 0;
    while (!(x & 1)) {
        x >>= 1;
        ++v;
    }
    return v;
}

// Inverse of an odd residue mod 2^n by Newton lifting.
inline int64_t inv_odd(int64_t x, int n)
{
    assert(x & 1);
    int64_t r = 1;
    for (int bits = 1; bits < n; bits *= 2)
        r = mod2k(r * (2 - mod2k(x * r, n)), n);
    assert(mod2k(x * r, n) == 1);
    return r;
}

struct Witt {
    int64_t a = 0, b = 0;

    Witt() = default;
    Witt(int64_t a_, int64_t b_ = 0) : a(mod2k(a_, witt_precision())), b(mod2k(b_, witt_precision())) {}

    static Witt zeta() { return Witt(0, 1); }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_unit() const { return ((a | b) & 1) != 0; }
    // W is unramified over Z2, so x = 2^v * unit with v = min val of the coordinates.
    int val() const
    {
        int n = witt_precision();
        int va = val2_int(a, n), vb = val2_int(b, n);
        return va < vb ? va : vb;
    }

    // zeta-conjugation: a + b*zeta  ->  (a-b) - b*zeta; norm is the odd integer a^2-ab+b^2 for units.
    Witt conj() const { return Witt(a - b, -b); }

    friend Witt operator+(const Witt& x, const Witt& y) { return Witt(x.a + y.a, x.b + y.b); }
    friend Witt operator-(const Witt& x, const Witt& y) { return Witt(x.a - y.a, x.b - y.b); }
    friend Witt operator-(const Witt& x) { return Witt(-x.a, -x.b); }
    friend Witt operator*(const Witt& x, const Witt& y)
    {
        // (a1+b1 z)(a2+b2 z) with z^2 = -1-z.
        return Witt(x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b);
    }
    Witt& operator+=(const Witt& y) { return *this = *this + y; }
    Witt& operator-=(const Witt& y) { return *this = *this - y; }
    Witt& operator*=(const Witt& y) { return *this = *this * y; }
    friend bool operator==(const Witt& x, const Witt& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Witt& x, const Witt& y) { return !(x == y); }

    Witt inverse() const
    {
        assert(is_unit());
        int n = witt_precision();
        int64_t nrm = mod2k(a * a - a * b + b * b, n);
        int64_t ni = inv_odd(nrm, n);
        Witt c = conj();
        return Witt(c.a * ni, c.b * ni);
    }

    Witt times2k(int k) const { return Witt(a << k, b << k); }
    // Exact division by 2^k; valid only when both coordinates are divisible.
    Witt div2k(int k) const
    {
        assert(val() >= k || is_zero());
        int n = witt_precision();
        // Interpret coordinates as residues mod 2^n and divide the lifts.
        assert(mod2k(a, k) == 0 && mod2k(b, k) == 0);
        (void)n;
        return Witt(a >> k, b >> k);
    }

    Witt reduced(int n) const
    {
        Witt r;
        r.a = mod2k(a, n);
        r.b = mod2k(b, n);
        return r;
    }

    std::string str() const
    {
        int n = witt_precision();
        // Balanced representatives keep small negatives readable.
        auto bal = [&](int64_t v) {
            int64_t half = int64_t(1) << (n - 1);
            return v > half ? v - (int64_t(1) << n) : v;
        };
        int64_t sa = bal(a), sb = bal(b);
        if (sb == 0)
            return std::to_string(sa);
        std::string s;
        if (sa != 0)
            s = std::to_string(sa);
        if (sb == 1)
            s += s.empty() ? "z" : "+z";
        else if (sb == -1)
            s += "-z";
        else if (sb > 0)
            s += (s.empty() ? "" : "+") + std::to_string(sb) + "z";
        else
            s += std::to_string(sb) + "z";
        return s;
    }
};

// The unit zeta^2 - zeta = -1 - 2*zeta; its square is -3, so the action
// formulas' divisions by it are multiplications by a precomputed inverse.
inline Witt zeta2_minus_zeta() { return Witt(-1, -2); }

// Residue field F4 = {0, 1, z, z+1} with two-bit encoding (a, b) for a + b*z.
struct F4 {
    uint8_t v = 0;
    F4() = default;
    explicit F4(uint8_t bits) : v(bits & 3) {}
    static F4 one() { return F4(1); }
    static F4 z() { return F4(2); }
    bool is_zero() const { return v == 0; }
    friend F4 operator+(F4 x, F4 y) { return F4(x.v ^ y.v); }
    friend F4 operator-(F4 x, F4 y) { return x + y; }
    friend F4 operator*(F4 x, F4 y)
    {
        // (a1+b1 z)(a2+b2 z) over F2 with z^2 = 1 + z.
        uint8_t a1 = x.v & 1, b1 = x.v >> 1, a2 = y.v & 1, b2 = y.v >> 1;
        uint8_t a = (a1 & a2) ^ (b1 & b2);
        uint8_t b = (a1 & b2) ^ (b1 & a2) ^ (b1 & b2);
        return F4(uint8_t(a | (b << 1)));
    }
    F4& operator+=(F4 y) { return *this = *this + y; }
    F4 inverse() const
    {
        assert(v != 0);
        if (v == 1)
            return F4(1);
        return F4(uint8_t(v == 2 ? 3 : 2)); // z and 1+z are mutually inverse
    }
    friend bool operator==(F4 x, F4 y) { return x.v == y.v; }
    friend bool operator!=(F4 x, F4 y) { return x.v != y.v; }
    std::string str() const
    {
        switch (v) {
        case 0: return "0";
        case 1: return "1";
        case 2: return "z";
        default: return "1+z";
        }
    }
};

inline F4 witt_mod2(const Witt& w) { return F4(uint8_t((w.a & 1) | ((w.b & 1) << 1))); }

} // namespace q8ss
