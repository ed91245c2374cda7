#pragma once
#include <algorithm>
#include <array>
#include <cassert>
#include <compare>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace q8ss {

// The first page of the 2-adic filtration spectral sequence is a monomial
// algebra on seven graded generators (plus the twisted-sector marker u and
// the tower coordinate h0), cut out by the relation table shipped in
// data/relations_e1.txt.  Classes are kept in a normal form computed once
// from a Groebner basis of the relation ideal over F2; the D-exponent is
// the only one allowed to be negative, and inverting D is handled by a
// saturation variable inside the basis computation.

// ---------------------------------------------------------------- monomials

struct Mono {
    int a = 0;   // v1
    int d = 0;   // D, exponent in Z
    int c = 0;   // k
    int e1 = 0;  // h1
    int e2 = 0;  // h2
    int ex = 0;  // x
    int ey = 0;  // y
    int u = 0;   // twisted-sector marker, 0 or 1
    int w = 0;   // h0 weight; no effect on (stem, filtration)

    auto operator<=>(const Mono&) const = default;

    int stem() const { return 2 * a + 8 * d - 4 * c + e1 + 3 * e2 - ex - ey; }
    int filt() const { return 4 * c + e1 + e2 + ex + ey; }
    // realization half-degree: the class lives over the degree-2t part of
    // the coefficient ring, t = (stem + filt)/2, independent of k, x, y.
    int half() const { return a + 4 * d + e1 + 2 * e2; }

    bool valid() const
    {
        return a >= 0 && c >= 0 && e1 >= 0 && e2 >= 0 && ex >= 0 &&
               ey >= 0 && u >= 0 && u <= 1 && w >= 0;
    }

    friend Mono operator*(const Mono& p, const Mono& q)
    {
        Mono r;
        r.a = p.a + q.a;
        r.d = p.d + q.d;
        r.c = p.c + q.c;
        r.e1 = p.e1 + q.e1;
        r.e2 = p.e2 + q.e2;
        r.ex = p.ex + q.ex;
        r.ey = p.ey + q.ey;
        r.u = p.u + q.u;
        r.w = p.w + q.w;
        return r;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        auto put = [&](const char* name, int e) {
            if (e == 0)
                return;
            if (!first)
                os << '*';
            first = false;
            os << name;
            if (e != 1)
                os << '^' << e;
        };
        put("v1", a);
        put("D", d);
        put("k", c);
        put("h1", e1);
        put("h2", e2);
        put("x", ex);
        put("y", ey);
        put("u", u);
        put("h0", w);
        if (first)
            os << '1';
        return os.str();
    }
};

struct Term {
    long long n = 0;
    Mono m;

    auto operator<=>(const Term&) const = default;
};
using Poly = std::vector<Term>;

inline void poly_normalize(Poly& p)
{
    std::sort(p.begin(), p.end(),
              [](const Term& s, const Term& t) { return s.m < t.m; });
    Poly out;
    for (auto& t : p) {
        if (!out.empty() && out.back().m == t.m)
            out.back().n += t.n;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.n == 0; });
    p = std::move(out);
}

inline Poly poly_add(Poly p, const Poly& q)
{
    p.insert(p.end(), q.begin(), q.end());
    poly_normalize(p);
    return p;
}

inline Poly poly_scale(Poly p, long long n)
{
    for (auto& t : p)
        t.n *= n;
    poly_normalize(p);
    return p;
}

inline Poly poly_mul(const Poly& p, const Poly& q)
{
    Poly r;
    for (auto& s : p)
        for (auto& t : q)
            r.push_back({s.n * t.n, s.m * t.m});
    poly_normalize(r);
    return r;
}

// coefficients mod 2; drops even terms (the tower-aware layers convert
// even coefficients into h0 weight before calling this).
inline Poly poly_mod2(Poly p)
{
    poly_normalize(p); // combine like terms before reducing coefficients
    for (auto& t : p)
        t.n = ((t.n % 2) + 2) % 2;
    std::erase_if(p, [](const Term& t) { return t.n == 0; });
    return p;
}

// factor out powers of 2 from each coefficient into the h0 weight.
inline Poly weight_normalize(Poly p)
{
    for (auto& t : p) {
        long long n = t.n < 0 ? -t.n : t.n;
        while (n > 1 && n % 2 == 0) {
            n /= 2;
            t.m.w += 1;
        }
        t.n = n;
    }
    poly_normalize(p);
    return p;
}

inline std::string poly_str(const Poly& p)
{
    if (p.empty())
        return "0";
    std::ostringstream os;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i)
            os << " + ";
        if (p[i].n != 1)
            os << p[i].n << '*';
        os << p[i].m.str();
    }
    return os.str();
}

inline bool poly_homogeneous(const Poly& p, int& stem, int& f, int& u)
{
    if (p.empty())
        return true;
    stem = p[0].m.stem();
    f = p[0].m.filt();
    u = p[0].m.u;
    for (auto& t : p)
        if (t.m.stem() != stem || t.m.filt() != f || t.m.u != u)
            return false;
    return true;
}

// ------------------------------------------------------------ normal forms

namespace gbx {

// Exponent vector over the saturated polynomial model: slots
// (v1, D, k, h1, h2, x, y, Dinv) with D*Dinv = 1 adjoined so that
// relations hiding behind a D-inverse (x^3 = y^3 and friends) are found.
using Exp = std::array<int, 8>;

inline int deg(const Exp& e)
{
    int s = 0;
    for (int v : e)
        s += v;
    return s;
}

// graded order, ties broken on (y, x, h1, h2, k, v1, D, Dinv); the normal
// form therefore prefers low total degree, then few x/y factors.
inline bool exp_less(const Exp& p, const Exp& q)
{
    int dp = deg(p), dq = deg(q);
    if (dp != dq)
        return dp < dq;
    static constexpr int pri[8] = {6, 5, 3, 4, 2, 0, 1, 7};
    for (int i : pri)
        if (p[i] != q[i])
            return p[i] < q[i];
    return false;
}

inline bool exp_divides(const Exp& p, const Exp& q)
{
    for (int i = 0; i < 8; ++i)
        if (p[i] > q[i])
            return false;
    return true;
}

inline Exp exp_add(const Exp& p, const Exp& q)
{
    Exp r;
    for (int i = 0; i < 8; ++i)
        r[i] = p[i] + q[i];
    return r;
}

inline Exp exp_sub(const Exp& p, const Exp& q)
{
    Exp r;
    for (int i = 0; i < 8; ++i)
        r[i] = p[i] - q[i];
    return r;
}

inline Exp exp_lcm(const Exp& p, const Exp& q)
{
    Exp r;
    for (int i = 0; i < 8; ++i)
        r[i] = std::max(p[i], q[i]);
    return r;
}

// char-2 polynomial = set of monomials, kept sorted descending; [0] = lead.
using SetPoly = std::vector<Exp>;

inline void setpoly_sort(SetPoly& p)
{
    std::sort(p.begin(), p.end(),
              [](const Exp& a, const Exp& b) { return exp_less(b, a); });
}

inline SetPoly setpoly_xor(const SetPoly& p, const SetPoly& q)
{
    SetPoly r;
    size_t i = 0, j = 0;
    while (i < p.size() && j < q.size()) {
        if (p[i] == q[j]) {
            ++i;
            ++j;
        } else if (exp_less(q[j], p[i]))
            r.push_back(p[i++]);
        else
            r.push_back(q[j++]);
    }
    while (i < p.size())
        r.push_back(p[i++]);
    while (j < q.size())
        r.push_back(q[j++]);
    return r;
}

inline SetPoly setpoly_shift(const SetPoly& p, const Exp& t)
{
    SetPoly r = p;
    for (auto& e : r)
        e = exp_add(e, t);
    return r;
}

struct Basis {
    std::vector<SetPoly> g;

    SetPoly reduce(SetPoly p) const
    {
        for (size_t pos = 0; pos < p.size();) {
            bool hit = false;
            for (auto& f : g) {
                if (exp_divides(f[0], p[pos])) {
                    p = setpoly_xor(p, setpoly_shift(f, exp_sub(p[pos], f[0])));
                    hit = true;
                    break;
                }
            }
            if (!hit)
                ++pos;
            else if (pos > 0)
                --pos;
        }
        return p;
    }

    bool is_normal(const Exp& e) const
    {
        for (auto& f : g)
            if (exp_divides(f[0], e))
                return false;
        return true;
    }

    static Basis build(std::vector<SetPoly> gens)
    {
        Basis b;
        for (auto& p : gens) {
            setpoly_sort(p);
            if (!p.empty())
                b.g.push_back(p);
        }
        struct Pair {
            size_t i, j;
            int lcm_deg;
        };
        std::vector<Pair> todo;
        auto push_pairs = [&](size_t j) {
            for (size_t i = 0; i < j; ++i) {
                Exp l = exp_lcm(b.g[i][0], b.g[j][0]);
                // product criterion: coprime leads give a trivial pair
                if (l == exp_add(b.g[i][0], b.g[j][0]))
                    continue;
                todo.push_back({i, j, deg(l)});
            }
        };
        for (size_t j = 0; j < b.g.size(); ++j)
            push_pairs(j);
        while (!todo.empty()) {
            size_t best = 0;
            for (size_t i = 1; i < todo.size(); ++i)
                if (todo[i].lcm_deg < todo[best].lcm_deg)
                    best = i;
            Pair pr = todo[best];
            todo.erase(todo.begin() + best);
            const SetPoly &f = b.g[pr.i], &h = b.g[pr.j];
            Exp l = exp_lcm(f[0], h[0]);
            SetPoly s = setpoly_xor(setpoly_shift(f, exp_sub(l, f[0])),
                                    setpoly_shift(h, exp_sub(l, h[0])));
            s = b.reduce(s);
            if (!s.empty()) {
                b.g.push_back(s);
                push_pairs(b.g.size() - 1);
            }
        }
        // inter-reduce for a unique, minimal basis
        for (bool changed = true; changed;) {
            changed = false;
            for (size_t i = 0; i < b.g.size(); ++i) {
                SetPoly orig = b.g[i];
                b.g.erase(b.g.begin() + i);
                SetPoly p = b.reduce(orig);
                if (p.empty()) {
                    changed = true;
                    --i;
                    continue;
                }
                b.g.insert(b.g.begin() + i, p);
                if (p != orig)
                    changed = true;
            }
        }
        std::sort(b.g.begin(), b.g.end(),
                  [](const SetPoly& p, const SetPoly& q) {
                      return exp_less(p[0], q[0]);
                  });
        return b;
    }
};

inline Exp to_exp(const Mono& m)
{
    Exp e{};
    e[0] = m.a;
    e[1] = m.d > 0 ? m.d : 0;
    e[2] = m.c;
    e[3] = m.e1;
    e[4] = m.e2;
    e[5] = m.ex;
    e[6] = m.ey;
    e[7] = m.d < 0 ? -m.d : 0;
    return e;
}

inline Mono from_exp(const Exp& e, int u, int w)
{
    Mono m;
    m.a = e[0];
    m.d = e[1] - e[7];
    m.c = e[2];
    m.e1 = e[3];
    m.e2 = e[4];
    m.ex = e[5];
    m.ey = e[6];
    m.u = u;
    m.w = w;
    return m;
}

} // namespace gbx

// ------------------------------------------------------------------ parsing

// Monomial expressions: '*'-separated factors, each a generator name with
// an optional '^' exponent.  Factors in braces are sums of monomials naming
// a single class, e.g. {h1^2+x*h1*v1}.  Exponents are integers or
// one-parameter linear forms in parentheses, e.g. (2n+1).
using NameTable = std::map<std::string, Poly>;

struct LinExp {
    long long c0 = 0;
    char par = 0;
    long long cp = 0;

    bool constant() const { return par == 0; }
    long long at(long long v) const { return c0 + cp * v; }
};

struct ExprFactor {
    Poly base;
    bool d_base = false; // base is a pure power of the invertible generator
    LinExp exp;
};

struct Expr {
    std::vector<ExprFactor> factors;
};

inline LinExp parse_linexp(const std::string& s, const std::string& where)
{
    LinExp e;
    size_t i = 0;
    auto num = [&](long long dflt) {
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-'))
            neg = s[i++] == '-';
        if (i >= s.size() || !isdigit((unsigned char)s[i]))
            return neg ? -dflt : dflt;
        long long v = 0;
        while (i < s.size() && isdigit((unsigned char)s[i]))
            v = 10 * v + (s[i++] - '0');
        return neg ? -v : v;
    };
    long long first = num(1);
    if (i < s.size() && isalpha((unsigned char)s[i])) {
        e.par = s[i++];
        e.cp = first;
        e.c0 = num(0);
    } else if (i == s.size()) {
        e.c0 = first;
    } else {
        throw std::runtime_error("bad exponent '" + s + "' in " + where);
    }
    if (i != s.size())
        throw std::runtime_error("bad exponent '" + s + "' in " + where);
    return e;
}

inline Poly parse_mono_product(const std::string& s, const NameTable& names,
                               const std::string& where);

inline Expr parse_expr(const std::string& s, const NameTable& names,
                       const std::string& where)
{
    Expr out;
    size_t i = 0;
    while (i < s.size()) {
        ExprFactor fac;
        if (s[i] == '{') {
            size_t close = s.find('}', i);
            if (close == std::string::npos)
                throw std::runtime_error("unbalanced brace in " + where);
            std::string inner = s.substr(i + 1, close - i - 1);
            i = close + 1;
            Poly sum;
            size_t p = 0;
            while (p <= inner.size()) {
                size_t q = inner.find('+', p);
                if (q == std::string::npos)
                    q = inner.size();
                Poly part =
                    parse_mono_product(inner.substr(p, q - p), names, where);
                sum = poly_add(sum, part);
                p = q + 1;
            }
            fac.base = sum;
        } else {
            size_t j = i;
            while (j < s.size() && s[j] != '^' && s[j] != '*')
                ++j;
            std::string name = s.substr(i, j - i);
            if (name == "1") {
                fac.base = Poly{{1, Mono{}}};
            } else {
                auto it = names.find(name);
                if (it == names.end())
                    throw std::runtime_error("unknown class '" + name +
                                             "' in " + where);
                fac.base = it->second;
            }
            fac.d_base = fac.base.size() == 1 && fac.base[0].n == 1 &&
                         fac.base[0].m == Mono{0, 1, 0, 0, 0, 0, 0, 0, 0};
            i = j;
        }
        if (i < s.size() && s[i] == '^') {
            ++i;
            std::string es;
            if (i < s.size() && s[i] == '(') {
                size_t close = s.find(')', i);
                if (close == std::string::npos)
                    throw std::runtime_error("unbalanced paren in " + where);
                es = s.substr(i + 1, close - i - 1);
                i = close + 1;
            } else {
                size_t j = i;
                if (j < s.size() && s[j] == '-')
                    ++j;
                while (j < s.size() && isdigit((unsigned char)s[j]))
                    ++j;
                es = s.substr(i, j - i);
                i = j;
            }
            fac.exp = parse_linexp(es, where);
        } else {
            fac.exp.c0 = 1;
        }
        out.factors.push_back(std::move(fac));
        if (i < s.size()) {
            if (s[i] != '*')
                throw std::runtime_error("bad factor separator in " + where +
                                         ": '" + s + "'");
            ++i;
        }
    }
    return out;
}

inline bool expr_params(const Expr& e, std::map<char, bool>& touches_d)
{
    bool any = false;
    for (auto& f : e.factors)
        if (!f.exp.constant()) {
            any = true;
            bool& td = touches_d[f.exp.par];
            td = td || f.d_base;
        }
    return any;
}

// base^e with e possibly negative; negative exponents only make sense on a
// single monomial whose non-D slots all vanish after scaling.
inline std::optional<Poly> poly_pow(const Poly& base, long long e)
{
    if (e < 0) {
        if (base.size() != 1 || base[0].n != 1)
            return std::nullopt;
        Mono m = base[0].m;
        Mono r;
        r.a = m.a * (int)e;
        r.d = m.d * (int)e;
        r.c = m.c * (int)e;
        r.e1 = m.e1 * (int)e;
        r.e2 = m.e2 * (int)e;
        r.ex = m.ex * (int)e;
        r.ey = m.ey * (int)e;
        r.u = m.u * (int)e;
        r.w = m.w * (int)e;
        if (!r.valid())
            return std::nullopt;
        return Poly{{1, r}};
    }
    Poly r{{1, Mono{}}};
    for (long long i = 0; i < e; ++i)
        r = poly_mul(r, base);
    return r;
}

inline std::optional<Poly> expr_eval(const Expr& e,
                                     const std::map<char, long long>& vals)
{
    Poly r{{1, Mono{}}};
    for (auto& f : e.factors) {
        long long ev = f.exp.constant() ? f.exp.c0
                                        : f.exp.at(vals.at(f.exp.par));
        if (ev < 0 && !f.d_base)
            return std::nullopt;
        auto p = poly_pow(f.base, ev);
        if (!p)
            return std::nullopt;
        r = poly_mul(r, *p);
    }
    for (auto& t : r)
        if (!t.m.valid())
            return std::nullopt;
    return r;
}

inline Poly parse_mono_product(const std::string& s, const NameTable& names,
                               const std::string& where)
{
    Expr e = parse_expr(s, names, where);
    std::map<char, bool> pars;
    if (expr_params(e, pars))
        throw std::runtime_error("parameter not allowed in " + where + ": '" +
                                 s + "'");
    auto p = expr_eval(e, {});
    if (!p)
        throw std::runtime_error("bad expression in " + where + ": '" + s +
                                 "'");
    return *p;
}

// --------------------------------------------------------------- data files

struct GenDef {
    std::string name;
    int stem = 0, f = 0;
    bool invertible = false, sigma = false, weight = false;
};

struct NamedClassDef {
    std::string name;
    Mono mono;
    int stem = 0, f = 0;
};

struct DiffRule {
    int r = 0;
    long long src_mult = 1;
    Poly src;
    Poly tgt;
    std::string line; // normalized key, also used in reports
};

struct EinfGen {
    int stem = 0, f = 0;
    long long order = 0; // group order of the tower; 0 = torsion free
    std::string name;
    Poly value;
};

struct EinfTable {
    std::vector<EinfGen> gens;
    std::vector<Poly> rels;
};

struct ExtRule {
    std::string gen;
    Poly by;
    long long src_mult = 1;
    Poly src;
    Poly tgt;
};

struct Ext2Rule {
    long long src_mult = 1;
    Poly src;
    Poly tgt;
};

struct PcEntry {
    std::string route;
    long long mult = 1;
    Poly cls;
};

namespace fileio {

inline std::vector<std::vector<std::string>> read_rows(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (size_t h = line.find('#'); h != std::string::npos)
            line.erase(h);
        std::istringstream is(line);
        std::vector<std::string> toks;
        std::string t;
        while (is >> t)
            toks.push_back(t);
        if (!toks.empty())
            rows.push_back(std::move(toks));
    }
    return rows;
}

inline long long to_int(const std::string& s, const std::string& where)
{
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (...) {
        pos = 0;
    }
    if (pos != s.size())
        throw std::runtime_error("expected integer, got '" + s + "' in " +
                                 where);
    return v;
}

} // namespace fileio

inline std::string data_dir()
{
    if (const char* e = std::getenv("Q8SS_DATA_DIR"); e && *e)
        return e;
#ifdef Q8SS_DATA_DIR
    return Q8SS_DATA_DIR;
#else
    return "data";
#endif
}

struct DataSet {
    std::vector<GenDef> generators;
    std::vector<NamedClassDef> classnames;
    NameTable names; // generators + classnames
    std::vector<Poly> rels_e1;
    std::vector<DiffRule> bss_rules[2];   // [0] weight-zero, [1] twisted
    std::vector<DiffRule> hfpss_rules[2]; // [0] weight-zero, [1] twisted
    EinfTable einf[2];                    // [0] weight-zero, [1] twisted
    std::vector<ExtRule> hidden_ext;
    std::vector<Ext2Rule> hidden2;
    std::vector<PcEntry> permanent;

    static DataSet load(const std::string& dir = data_dir());
    static const DataSet& get()
    {
        static DataSet ds = load();
        return ds;
    }
};

namespace detail {

// built-in exponent slots; generators.txt must agree with this table.
inline const std::map<std::string, Mono>& slot_table()
{
    static const std::map<std::string, Mono> t = {
        {"v1", Mono{1, 0, 0, 0, 0, 0, 0, 0, 0}},
        {"D", Mono{0, 1, 0, 0, 0, 0, 0, 0, 0}},
        {"k", Mono{0, 0, 1, 0, 0, 0, 0, 0, 0}},
        {"h1", Mono{0, 0, 0, 1, 0, 0, 0, 0, 0}},
        {"h2", Mono{0, 0, 0, 0, 1, 0, 0, 0, 0}},
        {"x", Mono{0, 0, 0, 0, 0, 1, 0, 0, 0}},
        {"y", Mono{0, 0, 0, 0, 0, 0, 1, 0, 0}},
        {"u", Mono{0, 0, 0, 0, 0, 0, 0, 1, 0}},
        {"h0", Mono{0, 0, 0, 0, 0, 0, 0, 0, 1}},
    };
    return t;
}

// expand a rule pattern over its parameters.  Parameters on the invertible
// generator range over [-16, 16], all others over [0, 16]; assignments that
// produce an invalid source are skipped, an invalid target is an error.
template <typename Emit>
inline void expand_patterns(const std::vector<Expr>& exprs,
                            const std::string& where, Emit emit)
{
    std::map<char, bool> pars;
    for (auto& e : exprs)
        expr_params(e, pars);
    std::vector<char> letters;
    for (auto& [p, td] : pars)
        letters.push_back(p);
    std::map<char, long long> vals;
    std::vector<long long> lo(letters.size()), hi(letters.size());
    for (size_t i = 0; i < letters.size(); ++i) {
        lo[i] = pars[letters[i]] ? -16 : 0;
        hi[i] = 16;
    }
    std::vector<long long> cur(letters.size());
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == letters.size()) {
            for (size_t j = 0; j < letters.size(); ++j)
                vals[letters[j]] = cur[j];
            std::vector<std::optional<Poly>> ev;
            for (auto& e : exprs)
                ev.push_back(expr_eval(e, vals));
            if (!ev.empty() && !ev[0])
                return; // source leaves the exponent lattice: skip
            for (size_t j = 1; j < ev.size(); ++j)
                if (!ev[j])
                    throw std::runtime_error("target leaves the lattice in " +
                                             where);
            std::vector<Poly> out;
            for (auto& p : ev)
                out.push_back(*p);
            emit(out);
            return;
        }
        for (long long v = lo[i]; v <= hi[i]; ++v) {
            cur[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
}

// tower = 2-adic tower table: the filtration jump is one and every target
// coefficient carries the page as a literal power of two.  Otherwise the
// filtration jump is the page number itself.
inline std::vector<DiffRule> load_diff_table(const std::string& path,
                                             const NameTable& names,
                                             int expect_u, bool tower)
{
    std::vector<DiffRule> out;
    std::set<std::string> seen;
    int lineno = 0;
    for (auto& toks : fileio::read_rows(path)) {
        ++lineno;
        std::string where = path + " row " + std::to_string(lineno);
        if (toks[0] != "d" || toks.size() < 7 || toks[4] != "->" ||
            (toks.size() - 5) % 2 != 0)
            throw std::runtime_error("bad differential row in " + where);
        int r = (int)fileio::to_int(toks[1], where);
        long long mult = fileio::to_int(toks[2], where);
        std::vector<Expr> exprs{parse_expr(toks[3], names, where)};
        std::vector<long long> coeffs;
        for (size_t i = 5; i < toks.size(); i += 2) {
            coeffs.push_back(fileio::to_int(toks[i], where));
            exprs.push_back(parse_expr(toks[i + 1], names, where));
        }
        if (tower)
            for (long long cf : coeffs)
                if (cf != (1LL << r))
                    throw std::runtime_error(
                        "tower coefficient is not 2^page in " + where);
        expand_patterns(exprs, where, [&](const std::vector<Poly>& ev) {
            DiffRule rule;
            rule.r = r;
            rule.src_mult = mult;
            rule.src = ev[0];
            for (size_t j = 1; j < ev.size(); ++j)
                rule.tgt = poly_add(rule.tgt, poly_scale(ev[j], coeffs[j - 1]));
            int s = 0, f = 0, uu = 0;
            if (!poly_homogeneous(rule.src, s, f, uu) || uu != expect_u)
                throw std::runtime_error("inhomogeneous source in " + where);
            int ts = 0, tf = 0, tu = 0;
            if (!poly_homogeneous(rule.tgt, ts, tf, tu))
                throw std::runtime_error("inhomogeneous target in " + where);
            if (!rule.tgt.empty() &&
                (ts != s - 1 || tf != f + (tower ? 1 : rule.r) || tu != uu))
                throw std::runtime_error("target bidegree off in " + where +
                                         " (" + poly_str(rule.tgt) + ")");
            rule.line = "d " + std::to_string(r) + " " +
                        std::to_string(mult) + " " + poly_str(rule.src) +
                        " -> " + poly_str(rule.tgt);
            if (seen.insert(rule.line).second)
                out.push_back(std::move(rule));
        });
    }
    return out;
}

inline EinfTable load_einf_table(const std::string& path, NameTable names,
                                 int expect_u)
{
    EinfTable out;
    int lineno = 0;
    for (auto& toks : fileio::read_rows(path)) {
        ++lineno;
        std::string where = path + " row " + std::to_string(lineno);
        if (toks[0] == "gen") {
            if (toks.size() < 8 || toks[5] != ":=" ||
                (toks.size() - 6) % 2 != 0)
                throw std::runtime_error("bad gen row in " + where);
            EinfGen g;
            g.stem = (int)fileio::to_int(toks[1], where);
            g.f = (int)fileio::to_int(toks[2], where);
            g.order = fileio::to_int(toks[3], where);
            g.name = toks[4];
            for (size_t i = 6; i < toks.size(); i += 2) {
                long long c = fileio::to_int(toks[i], where);
                Poly p = parse_mono_product(toks[i + 1], names, where);
                g.value = poly_add(g.value, poly_scale(p, c));
            }
            int s = 0, f = 0, uu = 0;
            if (!poly_homogeneous(g.value, s, f, uu) || s != g.stem ||
                f != g.f || uu != expect_u)
                throw std::runtime_error("gen bidegree off in " + where);
            names[g.name] = g.value;
            out.gens.push_back(std::move(g));
        } else if (toks[0] == "rel") {
            if ((toks.size() - 1) % 2 != 0)
                throw std::runtime_error("bad rel row in " + where);
            Poly rel;
            for (size_t i = 1; i < toks.size(); i += 2) {
                long long c = fileio::to_int(toks[i], where);
                Poly p = parse_mono_product(toks[i + 1], names, where);
                rel = poly_add(rel, poly_scale(p, c));
            }
            int s = 0, f = 0, uu = 0;
            if (!poly_homogeneous(rel, s, f, uu))
                throw std::runtime_error("inhomogeneous rel in " + where);
            out.rels.push_back(std::move(rel));
        } else {
            throw std::runtime_error("bad row in " + where);
        }
    }
    return out;
}

} // namespace detail

inline DataSet DataSet::load(const std::string& dir)
{
    DataSet ds;
    // generators: check the file against the built-in exponent slots
    for (auto& toks : fileio::read_rows(dir + "/generators.txt")) {
        std::string where = dir + "/generators.txt";
        if (toks.size() < 3)
            throw std::runtime_error("bad generator row in " + where);
        GenDef g;
        g.name = toks[0];
        g.stem = (int)fileio::to_int(toks[1], where);
        g.f = (int)fileio::to_int(toks[2], where);
        for (size_t i = 3; i < toks.size(); ++i) {
            if (toks[i] == "invertible")
                g.invertible = true;
            else if (toks[i] == "sigma")
                g.sigma = true;
            else if (toks[i] == "weight")
                g.weight = true;
            else
                throw std::runtime_error("unknown tag '" + toks[i] + "' in " +
                                         where);
        }
        auto it = detail::slot_table().find(g.name);
        if (it == detail::slot_table().end())
            throw std::runtime_error("generator '" + g.name +
                                     "' has no exponent slot");
        const Mono& m = it->second;
        if (!g.weight && (m.stem() != g.stem || m.filt() != g.f))
            throw std::runtime_error("generator '" + g.name +
                                     "' bidegree disagrees with slots");
        ds.names[g.name] = Poly{{1, m}};
        ds.generators.push_back(std::move(g));
    }
    // classnames
    for (auto& toks : fileio::read_rows(dir + "/classnames.txt")) {
        std::string where = dir + "/classnames.txt";
        if (toks.size() != 4)
            throw std::runtime_error("bad classname row in " + where);
        NamedClassDef n;
        n.name = toks[0];
        Poly p = parse_mono_product(toks[1], ds.names, where);
        if (p.size() != 1 || p[0].n != 1)
            throw std::runtime_error("classname '" + n.name +
                                     "' is not a monomial");
        n.mono = p[0].m;
        n.stem = (int)fileio::to_int(toks[2], where);
        n.f = (int)fileio::to_int(toks[3], where);
        if (n.mono.stem() != n.stem || n.mono.filt() != n.f)
            throw std::runtime_error("classname '" + n.name +
                                     "' bidegree disagrees");
        ds.names[n.name] = Poly{{1, n.mono}};
        ds.classnames.push_back(std::move(n));
    }
    // relations
    {
        std::string path = dir + "/relations_e1.txt";
        for (auto& toks : fileio::read_rows(path)) {
            if (toks[0] != "rel" || (toks.size() - 1) % 2 != 0)
                throw std::runtime_error("bad row in " + path);
            Poly rel;
            for (size_t i = 1; i < toks.size(); i += 2) {
                long long c = fileio::to_int(toks[i], path);
                rel = poly_add(
                    rel,
                    poly_scale(parse_mono_product(toks[i + 1], ds.names, path),
                               c));
            }
            int s = 0, f = 0, uu = 0;
            if (!poly_homogeneous(rel, s, f, uu) || uu != 0)
                throw std::runtime_error("inhomogeneous relation in " + path);
            ds.rels_e1.push_back(std::move(rel));
        }
    }
    ds.bss_rules[0] = detail::load_diff_table(dir + "/bss_diff_integer.txt",
                                              ds.names, 0, true);
    ds.bss_rules[1] =
        detail::load_diff_table(dir + "/bss_diff_sigma.txt", ds.names, 1, true);
    ds.hfpss_rules[0] = detail::load_diff_table(
        dir + "/hfpss_diff_integer.txt", ds.names, 0, false);
    ds.hfpss_rules[1] = detail::load_diff_table(dir + "/hfpss_diff_sigma.txt",
                                                ds.names, 1, false);
    ds.einf[0] =
        detail::load_einf_table(dir + "/bss_einf_integer.txt", ds.names, 0);
    ds.einf[1] =
        detail::load_einf_table(dir + "/bss_einf_sigma.txt", ds.names, 1);
    // hidden multiplicative extensions
    {
        std::string path = dir + "/hidden_ext.txt";
        int lineno = 0;
        for (auto& toks : fileio::read_rows(path)) {
            ++lineno;
            std::string where = path + " row " + std::to_string(lineno);
            if (toks[0] != "ext" || toks.size() != 7 || toks[4] != "->")
                throw std::runtime_error("bad ext row in " + where);
            std::string gen = toks[1];
            long long mult = fileio::to_int(toks[2], where);
            long long tc = fileio::to_int(toks[5], where);
            std::vector<Expr> exprs{parse_expr(toks[3], ds.names, where),
                                    parse_expr(toks[6], ds.names, where)};
            detail::expand_patterns(
                exprs, where, [&](const std::vector<Poly>& ev) {
                    ExtRule rule;
                    rule.gen = gen;
                    rule.by = ds.names.at(gen);
                    rule.src_mult = mult;
                    rule.src = ev[0];
                    rule.tgt = poly_scale(ev[1], tc);
                    ds.hidden_ext.push_back(std::move(rule));
                });
        }
    }
    // hidden extensions by 2
    {
        std::string path = dir + "/hidden2_integer.txt";
        int lineno = 0;
        for (auto& toks : fileio::read_rows(path)) {
            ++lineno;
            std::string where = path + " row " + std::to_string(lineno);
            if (toks[0] != "ext2" || toks.size() != 6 || toks[3] != "->")
                throw std::runtime_error("bad ext2 row in " + where);
            Ext2Rule rule;
            rule.src_mult = fileio::to_int(toks[1], where);
            rule.src = parse_mono_product(toks[2], ds.names, where);
            rule.tgt = poly_scale(
                parse_mono_product(toks[5], ds.names, where),
                fileio::to_int(toks[4], where));
            int s1 = 0, f1 = 0, u1 = 0, s2 = 0, f2 = 0, u2 = 0;
            poly_homogeneous(rule.src, s1, f1, u1);
            poly_homogeneous(rule.tgt, s2, f2, u2);
            if (s1 != s2 || u1 != u2 || f2 <= f1)
                throw std::runtime_error("ext2 endpoints off in " + where);
            ds.hidden2.push_back(std::move(rule));
        }
    }
    // permanent-cycle certificates
    {
        std::string path = dir + "/permanent_cycles.txt";
        int lineno = 0;
        for (auto& toks : fileio::read_rows(path)) {
            ++lineno;
            std::string where = path + " row " + std::to_string(lineno);
            if (toks[0] != "pc" || toks.size() != 4)
                throw std::runtime_error("bad pc row in " + where);
            std::string route = toks[1];
            if (route != "input" && route != "periodicity" &&
                route != "tate" && route != "norm")
                throw std::runtime_error("unknown pc route in " + where);
            long long mult = fileio::to_int(toks[2], where);
            std::vector<Expr> exprs{parse_expr(toks[3], ds.names, where)};
            detail::expand_patterns(exprs, where,
                                    [&](const std::vector<Poly>& ev) {
                                        ds.permanent.push_back(
                                            {route, mult, ev[0]});
                                    });
        }
    }
    return ds;
}

// --------------------------------------------------------------- the algebra

struct BasisOpts {
    int jmax = 8;              // members kept per tower of the degree-zero
                               // family generator v1^4/D
    int emax = 40;             // cap on the v1 exponent
    std::optional<int> dmin;   // window floor on the D exponent; when set,
                               // family truncation is disabled
};

struct BasisResult {
    int stem = 0, f = 0;
    bool sigma = false;
    std::vector<Mono> monos;        // canonical basis, one class each
    std::vector<int> family;        // index of the tower head in monos
    std::vector<int> family_index;  // position within the tower
    bool truncated = false;
    std::string warning;
};

inline int floor_div(int x, int y)
{
    int q = x / y;
    if ((x % y) && ((x < 0) != (y < 0)))
        --q;
    return q;
}

class ClassAlgebra {
public:
    explicit ClassAlgebra(const DataSet& d = DataSet::get()) : ds(d)
    {
        std::vector<gbx::SetPoly> gens;
        for (auto& rel : ds.rels_e1) {
            gbx::SetPoly p;
            for (auto& t : poly_mod2(rel))
                p.push_back(gbx::to_exp(t.m));
            gens.push_back(std::move(p));
        }
        // D * Dinv = 1 saturates the ideal at the invertible generator
        gens.push_back({gbx::Exp{0, 1, 0, 0, 0, 0, 0, 1}, gbx::Exp{}});
        gb = gbx::Basis::build(std::move(gens));
    }

    const DataSet& ds;

    // normal form of a class in the F4-algebra (coefficients mod 2)
    Poly reduce(const Poly& p) const
    {
        Poly out;
        for (auto& t : poly_mod2(p)) {
            gbx::SetPoly s{gbx::to_exp(t.m)};
            s = gb.reduce(s);
            for (auto& e : s)
                out.push_back({1, gbx::from_exp(e, t.m.u, t.m.w)});
        }
        return poly_mod2(out);
    }

    const DataSet& dataset() const { return ds; }

    bool is_basis_mono(const Mono& m) const
    {
        return gb.is_normal(gbx::to_exp(m));
    }

    bool is_zero(const Poly& p) const { return reduce(p).empty(); }

    bool equal(const Poly& p, const Poly& q) const
    {
        return is_zero(poly_add(p, q)); // char 2
    }

    // canonical basis of the bidegree: all normal-form monomials inside the
    // truncation window, grouped into towers under the degree-(0,0) family
    // generator (v1^4 against one D).
    BasisResult enumerate_basis(int stem, int f, bool sigma,
                                const BasisOpts& opts = {}) const
    {
        BasisResult res;
        res.stem = stem;
        res.f = f;
        res.sigma = sigma;
        if ((stem + f) % 2 != 0 || f < 0)
            return res;
        int acap = opts.dmin ? opts.emax
                             : std::min(opts.emax, 4 * opts.jmax - 1);
        res.monos = list_monos(stem, f, sigma, acap, opts.dmin);
        // truncation probe: anything alive in the next tower layer?
        auto probe = list_monos(stem, f, sigma, acap + 4, opts.dmin);
        if (probe.size() > res.monos.size()) {
            res.truncated = true;
            std::ostringstream os;
            os << "basis at (" << stem << "," << f << ") truncated: "
               << probe.size() - res.monos.size()
               << " class(es) beyond the window";
            res.warning = os.str();
        }
        for (size_t k = 0; k < res.monos.size(); ++k) {
            const Mono& m = res.monos[k];
            Mono head = m;
            head.d += head.a / 4;
            head.a %= 4;
            int idx = (int)k; // towers whose head left the window point here
            for (size_t i = 0; i < res.monos.size(); ++i) {
                Mono h = res.monos[i];
                h.d += h.a / 4;
                h.a %= 4;
                if (h == head) {
                    idx = (int)i;
                    break;
                }
            }
            res.family.push_back(idx);
            res.family_index.push_back(m.a / 4);
        }
        return res;
    }

    // product in the F4-algebra; declared hidden extensions lift products
    // that vanish in the graded ring to their tower-shifted value.
    Poly multiply(const Poly& p, const Poly& q) const
    {
        for (auto& s : p)
            for (auto& t : q)
                if (s.m.u + t.m.u > 1)
                    throw std::invalid_argument(
                        "product of two twisted-sector classes");
        Poly plain = reduce(poly_mul(p, q));
        Poly out = plain;
        if (plain.empty()) {
            Poly rp = reduce(p), rq = reduce(q);
            for (auto& rule : ds.hidden_ext) {
                Poly by = reduce(rule.by), src = reduce(rule.src);
                if ((equal(rp, by) && equal(rq, src)) ||
                    (equal(rq, by) && equal(rp, src)))
                    out = poly_add(out, rule.tgt);
            }
        }
        return out;
    }

private:
    gbx::Basis gb;

    std::vector<Mono> list_monos(int stem, int f, bool sigma, int acap,
                                 std::optional<int> dmin) const
    {
        std::vector<Mono> out;
        int t = (stem + f) / 2;
        for (int c = 0; 4 * c <= f; ++c) {
            int rem = f - 4 * c;
            for (int e1 = 0; e1 <= rem; ++e1)
                for (int e2 = 0; e1 + e2 <= rem; ++e2)
                    for (int ex = 0; e1 + e2 + ex <= rem; ++ex) {
                        int ey = rem - e1 - e2 - ex;
                        int t0 = t - e1 - 2 * e2;
                        int dhi = floor_div(t0, 4);
                        int dlo = -floor_div(-(t0 - acap), 4);
                        if (dmin)
                            dlo = std::max(dlo, *dmin);
                        for (int d = dlo; d <= dhi; ++d) {
                            Mono m;
                            m.a = t0 - 4 * d;
                            m.d = d;
                            m.c = c;
                            m.e1 = e1;
                            m.e2 = e2;
                            m.ex = ex;
                            m.ey = ey;
                            m.u = sigma ? 1 : 0;
                            if (m.a < 0 || m.a > acap)
                                continue;
                            if (is_basis_mono(m))
                                out.push_back(m);
                        }
                    }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

// ------------------------------------------------------- generator matching

struct SummandSpec {
    std::string name;
    long long order = 0; // group order, 0 = torsion free
};

struct MatchReport {
    bool ok = true;
    std::string detail;
};

// bijection between expected generators and computed summand orders;
// any order mismatch is a hard failure.
inline MatchReport match_generators(std::vector<SummandSpec> expected,
                                    std::vector<long long> computed)
{
    MatchReport rep;
    std::multiset<long long> want, got(computed.begin(), computed.end());
    for (auto& e : expected)
        want.insert(e.order);
    if (want == got)
        return rep;
    rep.ok = false;
    std::ostringstream os;
    os << "expected orders {";
    for (auto v : want)
        os << ' ' << v;
    os << " } but computed {";
    for (auto v : got)
        os << ' ' << v;
    os << " }";
    rep.detail = os.str();
    return rep;
}

} // namespace q8ss
