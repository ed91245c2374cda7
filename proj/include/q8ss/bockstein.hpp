#pragma once

// 2-divisibility spectral sequence of the class algebra.  Page one is the
// mod-2 algebra tensored with F4[h0], the h0 weight counting the power of 2;
// the limit page is the associated graded of the integral tower in each
// bidegree.  Seed differentials come from the rule tables; everything else
// is forced by the product rule.  Pages turn as homology of truncated
// F4[h0]-modules, one bidegree at a time.

#include <q8ss/class_algebra.hpp>
#include <q8ss/snf.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace q8ss {

struct BockOpts {
    int smin = -12; // engine window; keep wider than any window compared
    int smax = 44;
    int fmax = 16;
    int dmin = -18; // floor on the D exponent of tracked monomials
    int pages = 3;  // every differential lives on pages 1..pages
    int probe = 2;  // extra pages that must stay empty
    int h0cap = 8;  // h0 precision of the page modules
};

// first differential of one basis monomial
struct FirstDiff {
    int zero_through = 0; // pages proven zero
    int r = 0;            // first nonzero page; 0 = none found
    Poly tgt;             // value, every term at h0 weight r
    bool assumed = false; // a zero rests on "no usable factorization"
    std::string via;      // what decided the value

    bool resolved(int cap) const { return r > 0 || zero_through >= cap; }
};

// one cyclic F4[h0]-summand of a page in a fixed bidegree
struct Tower {
    Poly head;      // F2 combination of weighted basis monomials
    int height = 0; // h0 height; 0 = torsion free
};

namespace bockdetail {

inline int find_bit(const std::vector<uint64_t>& v)
{
    for (size_t w = 0; w < v.size(); ++w)
        if (v[w])
            return int(w * 64) + std::countr_zero(v[w]);
    return -1;
}

// F2 span of the shifted tower heads h0^t * head_j of one bidegree, with
// expression recovery; coordinates come back packed as F4h scalars.
class SpanSolver {
public:
    SpanSolver(const std::vector<Tower>& tw, int cap) : cap_(cap)
    {
        // shifts below the height carry the module; shifts at or above it
        // are zero classes the solver must still absorb
        std::vector<std::pair<int, int>> zeros;
        for (int j = 0; j < int(tw.size()); ++j) {
            int e = tw[size_t(j)].height ? tw[size_t(j)].height : cap_;
            for (int t = 0; t < e; ++t)
                keys_.push_back({j, t});
            for (int t = e; t < cap_; ++t)
                zeros.push_back({j, t});
        }
        std::set<Mono> rows;
        for (int j = 0; j < int(tw.size()); ++j)
            for (int t = 0; t < cap_; ++t)
                for (auto& term : tw[size_t(j)].head) {
                    Mono m = term.m;
                    m.w += t;
                    if (m.w < cap_)
                        rows.insert(m);
                }
        for (auto& m : rows)
            row_.emplace(m, int(row_.size()));
        words_ = int(row_.size() + 63) / 64;
        rwords_ = int(keys_.size() + 63) / 64;
        auto insert_col = [&](int j, int t, bool real, size_t c) {
            Poly p;
            for (auto& term : tw[size_t(j)].head) {
                Term s = term;
                s.m.w += t;
                if (s.m.w < cap_)
                    p.push_back(s);
            }
            auto bits = to_bits(p);
            if (!bits)
                throw std::logic_error("tower head escapes its own row set");
            std::vector<uint64_t> recipe(size_t(rwords_), 0);
            if (real)
                recipe[c / 64] |= uint64_t(1) << (c % 64);
            eliminate(*bits, recipe);
            int piv = find_bit(*bits);
            if (piv < 0) {
                if (real)
                    throw std::logic_error(
                        "dependent tower shifts in one bidegree");
                return; // zero class already swallowed by the span
            }
            auto [it, fresh] = cols_.emplace(
                piv, Col{std::move(*bits), std::move(recipe)});
            if (!fresh)
                throw std::logic_error("pivot collision in the span");
        };
        for (size_t c = 0; c < keys_.size(); ++c)
            insert_col(keys_[c].first, keys_[c].second, true, c);
        for (auto& [j, t] : zeros)
            insert_col(j, t, false, 0);
    }

    // packed F4h coordinates, one per tower; empty when v is outside the span
    std::optional<std::vector<uint64_t>> express(const Poly& v, int ntw) const
    {
        Poly p;
        for (auto& t : v)
            if (t.m.w < cap_)
                p.push_back(t);
        p = poly_mod2(p);
        auto bits = to_bits(p);
        if (!bits)
            return std::nullopt;
        std::vector<uint64_t> recipe(size_t(rwords_), 0);
        eliminate(*bits, recipe);
        if (find_bit(*bits) >= 0)
            return std::nullopt;
        std::vector<uint64_t> coord(size_t(ntw), 0);
        for (size_t c = 0; c < keys_.size(); ++c)
            if (recipe[c / 64] >> (c % 64) & 1) {
                auto [j, t] = keys_[c];
                coord[size_t(j)] |= uint64_t(1) << (2 * t);
            }
        return coord;
    }

private:
    int cap_ = 0, words_ = 0, rwords_ = 0;
    std::vector<std::pair<int, int>> keys_; // column -> (tower, shift)
    std::map<Mono, int> row_;
    struct Col {
        std::vector<uint64_t> bits, recipe;
    };
    std::map<int, Col> cols_; // pivot -> reduced column

    std::optional<std::vector<uint64_t>> to_bits(const Poly& p) const
    {
        std::vector<uint64_t> v(size_t(words_), 0);
        for (auto& t : p) {
            auto it = row_.find(t.m);
            if (it == row_.end())
                return std::nullopt;
            v[size_t(it->second) / 64] ^= uint64_t(1) << (it->second % 64);
        }
        return v;
    }

    // pivots ascend, and a column only touches rows at or above its pivot,
    // so one ordered sweep reduces completely
    void eliminate(std::vector<uint64_t>& bits,
                   std::vector<uint64_t>& recipe) const
    {
        for (auto& [piv, col] : cols_)
            if (bits[size_t(piv) / 64] >> (piv % 64) & 1) {
                for (int w = 0; w < words_; ++w)
                    bits[size_t(w)] ^= col.bits[size_t(w)];
                for (int w = 0; w < rwords_; ++w)
                    recipe[size_t(w)] ^= col.recipe[size_t(w)];
            }
    }
};

} // namespace bockdetail

class Bockstein {
public:
    explicit Bockstein(const ClassAlgebra& alg, BockOpts opt = {})
        : A_(alg), opt_(opt)
    {
        load_rules();
        build_scope();
        close_dictionary();
        audit_dictionary();
        for (int sec = 0; sec < 2; ++sec)
            run_pages(sec);
    }

    const FirstDiff& first_diff(Mono m) const
    {
        m.w = 0;
        auto it = dict_.find(m);
        if (it == dict_.end())
            throw std::out_of_range("monomial outside the engine scope: " +
                                    m.str());
        return it->second;
    }

    const std::map<Mono, FirstDiff>& dictionary() const { return dict_; }

    // bidegrees far enough from the window edge that no tracked class can
    // have gained or lost a differential across the boundary
    bool reliable(int stem, int f) const
    {
        return f >= 0 && stem - opt_.smin > opt_.pages &&
               opt_.smax - stem > opt_.pages && opt_.fmax - f > opt_.pages;
    }

    const std::vector<Tower>& einf(bool sigma, int stem, int f) const
    {
        if (!reliable(stem, f))
            throw std::out_of_range("bidegree outside the reliable window");
        static const std::vector<Tower> none;
        auto it = einf_[sigma].find({stem, f});
        return it == einf_[sigma].end() ? none : it->second;
    }

    // F4 dimension of the weight-w layer of the limit page, w = 0..5,
    // ignoring towers born below the given window level
    std::array<int, 6> einf_profile(bool sigma, int stem, int f,
                                    int born_min) const
    {
        std::array<int, 6> out{};
        for (auto& t : einf(sigma, stem, f)) {
            int born = t.head[0].m.d;
            for (auto& term : t.head)
                born = std::min(born, term.m.d);
            if (born < born_min)
                continue;
            for (int w = 0; w < 6; ++w)
                if (t.height == 0 || t.height > w)
                    out[size_t(w)] += 1;
        }
        return out;
    }

    // every generator row of the limit table must land in its bidegree at
    // weight zero with the listed order, and every relation must vanish
    MatchReport compare_table(bool sigma) const
    {
        const F4h ring(opt_.h0cap);
        const EinfTable& tab = A_.ds.einf[sigma];
        MatchReport rep;
        std::ostringstream bad;
        for (auto& g : tab.gens) {
            const auto& tws = einf(sigma, g.stem, g.f);
            bockdetail::SpanSolver sol(tws, opt_.h0cap);
            Poly v = A_.reduce(weight_normalize(g.value));
            std::optional<std::vector<uint64_t>> c;
            if (!v.empty())
                c = sol.express(v, int(tws.size()));
            if (!c) {
                bad << "generator " << g.name << " at (" << g.stem << ","
                    << g.f << ") not present on the limit page; ";
                continue;
            }
            int minval = opt_.h0cap, ordexp = 0;
            bool infinite = false, hit = false;
            for (size_t j = 0; j < c->size(); ++j) {
                if ((*c)[j] == 0)
                    continue;
                hit = true;
                int v0 = ring.val((*c)[j]);
                minval = std::min(minval, v0);
                if (tws[j].height == 0)
                    infinite = true;
                else
                    ordexp = std::max(ordexp, tws[j].height - v0);
            }
            if (!hit) {
                bad << "generator " << g.name << " vanishes on the limit "
                    << "page; ";
                continue;
            }
            if (minval != 0) {
                bad << "generator " << g.name << " is an h0 multiple; ";
                continue;
            }
            long long want = g.order;
            if (want != 0 && want != 2 && want != 4 && want != 8)
                throw std::runtime_error("unsupported tower order in table");
            int wexp = want == 0 ? -1 : (want == 2 ? 1 : want == 4 ? 2 : 3);
            int gexp = infinite ? -1 : ordexp;
            if (gexp != wexp)
                bad << "generator " << g.name << " has order exponent "
                    << gexp << ", table says " << wexp << "; ";
        }
        for (auto& rel : tab.rels) {
            Poly v = A_.reduce(weight_normalize(rel));
            if (v.empty())
                continue;
            int stem = 0, f = 0, u = 0;
            if (!poly_homogeneous(v, stem, f, u))
                throw std::runtime_error("inhomogeneous relation in table");
            const auto& tws = einf(sigma, stem, f);
            bockdetail::SpanSolver sol(tws, opt_.h0cap);
            auto c = sol.express(v, int(tws.size()));
            if (!c)
                continue; // no surviving component to hit
            bool zero = true;
            for (auto cv : *c)
                if (cv != 0)
                    zero = false;
            if (!zero)
                bad << "relation " << poly_str(rel)
                    << " survives on the limit page; ";
        }
        rep.detail = bad.str();
        rep.ok = rep.detail.empty();
        return rep;
    }

    // first differentials found by the product rule rather than read from
    // the seed table, restricted to the engine window
    std::vector<std::string> derived_rows(bool sigma) const
    {
        std::vector<std::string> out;
        for (auto& [m, fd] : dict_) {
            if (fd.r == 0 || m.u != int(sigma))
                continue;
            if (fd.via.rfind("rule", 0) == 0)
                continue;
            if (m.stem() < opt_.smin || m.stem() > opt_.smax ||
                m.filt() > opt_.fmax || m.d < opt_.dmin)
                continue;
            std::ostringstream os;
            os << "d" << fd.r << " " << m.str() << " -> " << poly_str(fd.tgt)
               << "  [" << fd.via << (fd.assumed ? ", assumed" : "") << "]";
            out.push_back(os.str());
        }
        return out;
    }

    int assumed_count(bool window_only = true) const
    {
        int n = 0;
        for (auto& [m, fd] : dict_) {
            if (!fd.assumed)
                continue;
            if (window_only &&
                (m.stem() < opt_.smin || m.stem() > opt_.smax ||
                 m.filt() > opt_.fmax || m.d < opt_.dmin))
                continue;
            ++n;
        }
        return n;
    }

    const std::vector<std::string>& notes() const { return notes_; }
    const BockOpts& opts() const { return opt_; }

private:
    using Key = std::pair<int, int>; // (stem, filtration)

    struct RuleInfo {
        int r = 0;
        Poly tgt;
        std::string line;
    };

    const ClassAlgebra& A_;
    BockOpts opt_;
    std::map<Mono, RuleInfo> rules_;
    std::map<Mono, FirstDiff> dict_;
    std::map<Mono, std::vector<std::pair<Mono, Mono>>> splits_;
    std::map<Mono, std::vector<Mono>> deps_; // factor -> monomials using it
    std::map<Mono, Poly> nfc_;               // normal form cache
    std::map<Key, std::vector<Tower>> einf_[2];
    std::vector<std::string> notes_;

    int cap() const { return opt_.pages + opt_.probe; }

    const Poly& nf(Mono m)
    {
        m.w = 0;
        auto it = nfc_.find(m);
        if (it == nfc_.end())
            it = nfc_.emplace(m, A_.reduce(Poly{{1, m}})).first;
        return it->second;
    }

    // product with a weight-zero cofactor, normalized; weights ride along
    Poly nf_mul(const Poly& p, const Mono& c)
    {
        Poly out;
        for (auto& t : p) {
            Mono prod = t.m * c;
            int w = prod.w;
            prod.w = 0;
            for (auto& s : nf(prod)) {
                Term q = s;
                q.m.w = w;
                out.push_back(q);
            }
        }
        return poly_mod2(out);
    }

    void load_rules()
    {
        for (int sec = 0; sec < 2; ++sec)
            for (const DiffRule& rule : A_.ds.bss_rules[sec]) {
                if (rule.src_mult != 1)
                    throw std::runtime_error(
                        "tower rule with a source multiple: " + rule.line);
                Poly src = A_.reduce(rule.src);
                if (src.size() != 1 || src[0].m.w != 0)
                    throw std::runtime_error(
                        "tower rule source is not a basis monomial: " +
                        rule.line);
                if (rule.r < 1 || rule.r > opt_.pages)
                    throw std::runtime_error(
                        "rule page outside the collapse range: " + rule.line);
                Poly tgt = A_.reduce(weight_normalize(rule.tgt));
                if (tgt.empty())
                    throw std::runtime_error(
                        "rule target vanishes in the algebra: " + rule.line);
                for (auto& t : tgt)
                    if (t.m.w != rule.r)
                        throw std::runtime_error(
                            "rule target weight disagrees with its page: " +
                            rule.line);
                auto [it, fresh] = rules_.emplace(
                    src[0].m, RuleInfo{rule.r, tgt, rule.line});
                if (!fresh && (it->second.r != rule.r ||
                               it->second.tgt != tgt))
                    throw std::runtime_error("conflicting rules for " +
                                             src[0].m.str());
            }
    }

    bool in_scope(const Mono& m) const { return dict_.count(m) != 0; }

    void build_scope()
    {
        // the window padded by one D move up and a few divisor hops, so
        // every factorization the closure can need stays resolvable
        int lo = opt_.smin - 2, hi = opt_.smax + 16;
        BasisOpts bo;
        bo.emax = 1 << 20;
        bo.dmin = opt_.dmin - 1;
        for (int sec = 0; sec < 2; ++sec)
            for (int f = 0; f <= opt_.fmax; ++f)
                for (int stem = lo; stem <= hi; ++stem) {
                    if ((stem + f) % 2)
                        continue;
                    for (auto& m :
                         A_.enumerate_basis(stem, f, sec, bo).monos)
                        dict_.emplace(m, FirstDiff{});
                }
        // seeds: the unit is rigid, the invertible family has no
        // factorization of its own and is carried by the table
        for (auto& [m, fd] : dict_) {
            if (m.filt() != 0 || m.a != 0 || m.u != 0)
                continue;
            Mono probe = m;
            probe.d = 0;
            if (probe != Mono{})
                continue;
            FirstDiff seed;
            seed.zero_through = cap();
            seed.assumed = m.d != 0;
            seed.via = m.d ? "invertible family seed" : "unit";
            fd = seed;
        }
        for (auto& [m, fd] : dict_) {
            auto& sp = splits_[m];
            auto add = [&](const Mono& g, const Mono& c) {
                if (c == Mono{} || g == Mono{})
                    return;
                if (!in_scope(g) || !in_scope(c))
                    return;
                if (std::find(sp.begin(), sp.end(),
                              std::make_pair(g, c)) == sp.end())
                    sp.push_back({g, c});
            };
            auto divisor = [&](const Mono& g) {
                Mono c;
                c.a = m.a - g.a;
                c.d = m.d - g.d;
                c.c = m.c - g.c;
                c.e1 = m.e1 - g.e1;
                c.e2 = m.e2 - g.e2;
                c.ex = m.ex - g.ex;
                c.ey = m.ey - g.ey;
                c.u = m.u - g.u;
                add(g, c);
            };
            Mono g;
            if (m.a) {
                g = Mono{};
                g.a = 1;
                divisor(g);
            }
            if (m.c) {
                g = Mono{};
                g.c = 1;
                divisor(g);
            }
            if (m.e1) {
                g = Mono{};
                g.e1 = 1;
                divisor(g);
            }
            if (m.e2) {
                g = Mono{};
                g.e2 = 1;
                divisor(g);
            }
            if (m.ex) {
                g = Mono{};
                g.ex = 1;
                divisor(g);
            }
            if (m.ey) {
                g = Mono{};
                g.ey = 1;
                divisor(g);
            }
            if (m.u) {
                g = Mono{};
                g.u = 1;
                divisor(g);
            }
            // move one power of the invertible generator in or out
            for (int s : {1, -1}) {
                Mono sh = m;
                sh.d += s;
                Poly red = A_.reduce(Poly{{1, sh}});
                if (red.size() != 1)
                    continue;
                g = Mono{};
                g.d = -s;
                add(g, red[0].m);
            }
        }
        for (auto& [m, sp] : splits_)
            for (auto& [g, c] : sp) {
                deps_[g].push_back(m);
                deps_[c].push_back(m);
            }
        std::ostringstream os;
        os << "scope: " << dict_.size() << " monomials, " << rules_.size()
           << " seeded rules";
        notes_.push_back(os.str());
    }

    struct Cand {
        Poly v;
        bool tainted = false;
        std::string prov;
    };

    // page-r candidates for d_r(m) with every factor status final enough;
    // stalled = some factorization is still undecided at this page
    std::vector<Cand> candidates(const Mono& m, int r, bool& stalled)
    {
        std::vector<Cand> cands;
        auto ri = rules_.find(m);
        if (ri != rules_.end()) {
            if (ri->second.r == r)
                cands.push_back({ri->second.tgt, false,
                                 "rule " + ri->second.line});
            else if (ri->second.r > r)
                cands.push_back({{}, false, "rule page"});
            else
                throw std::logic_error("rule survived past its page: " +
                                       ri->second.line);
        }
        for (auto& [g, c] : splits_.at(m)) {
            const FirstDiff& sg = dict_.at(g);
            const FirstDiff& sc = dict_.at(c);
            if ((sg.r && sg.r < r) || (sc.r && sc.r < r))
                continue; // a factor already died, no information here
            bool kg = sg.r == r || sg.r > r || sg.zero_through >= r;
            bool kc = sc.r == r || sc.r > r || sc.zero_through >= r;
            if (!kg || !kc) {
                stalled = true;
                continue;
            }
            Poly v;
            if (sg.r == r)
                v = poly_add(v, nf_mul(sg.tgt, c));
            if (sc.r == r)
                v = poly_add(v, nf_mul(sc.tgt, g));
            v = poly_mod2(v); // char 2: the two halves of a square cancel
            cands.push_back({std::move(v), sg.assumed || sc.assumed,
                             "factor " + g.str()});
        }
        return cands;
    }

    // returns true when the state changed
    bool attempt(const Mono& m)
    {
        FirstDiff& st = dict_.at(m);
        bool advanced = false;
        while (!st.resolved(cap())) {
            int r = st.zero_through + 1;
            bool stalled = false;
            auto cands = candidates(m, r, stalled);
            if (cands.empty()) {
                if (stalled)
                    break;
                st.zero_through = r;
                st.assumed = true;
                st.via = "no usable factorization";
                advanced = true;
                continue;
            }
            for (size_t i = 1; i < cands.size(); ++i)
                if (cands[i].v != cands[0].v)
                    throw std::runtime_error(
                        "differential conflict on " + m.str() + " at page " +
                        std::to_string(r) + ": " + cands[0].prov + " gives " +
                        poly_str(cands[0].v) + " but " + cands[i].prov +
                        " gives " + poly_str(cands[i].v));
            size_t pick = 0;
            while (pick < cands.size() && cands[pick].tainted)
                ++pick;
            if (pick == cands.size())
                pick = 0;
            if (cands[pick].v.empty()) {
                st.zero_through = r;
                st.assumed = st.assumed || cands[pick].tainted;
                advanced = true;
                continue;
            }
            if (r > opt_.pages)
                throw std::runtime_error(
                    "nonzero differential past the collapse page: d" +
                    std::to_string(r) + "(" + m.str() + ") = " +
                    poly_str(cands[pick].v) + " via " + cands[pick].prov);
            for (auto& t : cands[pick].v)
                if (t.m.w != r)
                    throw std::logic_error("derived value at wrong weight");
            st.r = r;
            st.tgt = cands[pick].v;
            st.via = cands[pick].prov;
            st.assumed = st.assumed || cands[pick].tainted;
            advanced = true;
        }
        return advanced;
    }

    void close_dictionary()
    {
        std::deque<Mono> queue;
        std::set<Mono> queued;
        auto push = [&](const Mono& m) {
            if (queued.insert(m).second)
                queue.push_back(m);
        };
        for (auto& [m, fd] : dict_)
            push(m);
        auto drain = [&] {
            while (!queue.empty()) {
                Mono m = queue.front();
                queue.pop_front();
                queued.erase(m);
                if (!attempt(m))
                    continue;
                auto it = deps_.find(m);
                if (it != deps_.end())
                    for (auto& d : it->second)
                        push(d);
            }
        };
        drain();
        // cyclic factorizations never settle on their own; pin open
        // monomials as permanent one at a time and let the rest follow.
        // Resolution is monotone, so the scan never needs to back up.
        int marked = 0;
        std::vector<Mono> order;
        order.reserve(dict_.size());
        for (auto& [m, fd] : dict_)
            order.push_back(m);
        for (size_t scan = 0; scan < order.size(); ++scan) {
            FirstDiff& st = dict_.at(order[scan]);
            if (st.resolved(cap()))
                continue;
            st.zero_through = cap();
            st.assumed = true;
            st.via = "no usable factorization";
            ++marked;
            auto it = deps_.find(order[scan]);
            if (it != deps_.end())
                for (auto& d : it->second)
                    push(d);
            drain();
        }
        std::ostringstream os;
        os << "dictionary closed, " << marked << " monomials pinned, "
           << assumed_count(false) << " assumptions in scope";
        notes_.push_back(os.str());
    }

    // with every status final, all candidates must agree at every page
    void audit_dictionary()
    {
        for (auto& [m, fd] : dict_) {
            int last = fd.r ? fd.r : cap();
            for (int r = 1; r <= last; ++r) {
                bool stalled = false;
                auto cands = candidates(m, r, stalled);
                if (stalled)
                    throw std::logic_error("unresolved factor after closure");
                Poly want = (r == fd.r) ? fd.tgt : Poly{};
                for (auto& c : cands)
                    if (c.v != want)
                        throw std::runtime_error(
                            "differential audit failed on " + m.str() +
                            " at page " + std::to_string(r) + ": " + c.prov +
                            " gives " + poly_str(c.v) + ", dictionary has " +
                            poly_str(want));
            }
            // reductions like D*y^2 = h2^2 can trade one D for other
            // letters, but never more than one per value term
            for (auto& t : fd.tgt)
                if (t.m.d < m.d - 1)
                    throw std::logic_error(
                        "differential descends more than one window level: " +
                        m.str() + " -> " + poly_str(fd.tgt));
        }
    }

    static int eff_height(const Tower& t, int capv)
    {
        return t.height ? t.height : capv;
    }

    void run_pages(int sec)
    {
        const F4h ring(opt_.h0cap);
        std::map<Key, std::vector<Tower>> pg;
        BasisOpts bo;
        bo.emax = 1 << 20;
        bo.dmin = opt_.dmin;
        for (int f = 0; f <= opt_.fmax; ++f)
            for (int stem = opt_.smin; stem <= opt_.smax; ++stem) {
                if ((stem + f) % 2)
                    continue;
                auto monos = A_.enumerate_basis(stem, f, sec, bo).monos;
                if (monos.empty())
                    continue;
                std::vector<Tower>& tws = pg[{stem, f}];
                for (auto& m : monos)
                    tws.push_back(Tower{Poly{{1, m}}, 0});
            }
        for (int r = 1; r <= opt_.pages; ++r) {
            // phase one: all differentials of this page, as matrices in
            // tower coordinates
            std::map<Key, bockdetail::SpanSolver> solvers;
            auto solver = [&](const Key& b) -> bockdetail::SpanSolver& {
                auto it = solvers.find(b);
                if (it == solvers.end())
                    it = solvers
                             .emplace(b, bockdetail::SpanSolver(
                                             pg.at(b), opt_.h0cap))
                             .first;
                return it->second;
            };
            std::map<Key, Mat<F4h>> bout;
            int kills = 0;
            for (auto& [b, tws] : pg) {
                Key tgt{b.first - 1, b.second + 1};
                // edge bidegrees keep stale survivors on purpose: their
                // outgoing differentials left the window on earlier pages
                bool trusted = reliable(b.first, b.second);
                bool tracked = tgt.first >= opt_.smin &&
                               tgt.second <= opt_.fmax && pg.count(tgt);
                int ntv = tracked ? int(pg.at(tgt).size()) : 0;
                Mat<F4h> mat(ntv, int(tws.size()));
                for (size_t i = 0; i < tws.size(); ++i) {
                    Poly v;
                    for (auto& term : tws[i].head) {
                        // a term dead since an earlier page sits in a head
                        // only because its value canceled against the other
                        // terms; the combination carries no later value
                        const FirstDiff& fd = first_diff(term.m);
                        if (fd.r != r)
                            continue;
                        for (auto& s : fd.tgt) {
                            Term q = s;
                            q.m.w += term.m.w;
                            v.push_back(q);
                        }
                    }
                    v = poly_mod2(v);
                    // drop what the window cannot represent: weights past
                    // the h0 cap, and terms below the family floor (their
                    // towers are trimmed from every reported profile)
                    std::erase_if(v, [&](const Term& t) {
                        return t.m.w >= opt_.h0cap || t.m.d < opt_.dmin;
                    });
                    if (v.empty())
                        continue;
                    if (!tracked) {
                        if (trusted && tgt.first >= opt_.smin &&
                            tgt.second <= opt_.fmax)
                            throw std::runtime_error(
                                "differential into an empty bidegree");
                        continue; // leaves the window; edge poisoning covers
                    }
                    auto coords = solver(tgt).express(v, ntv);
                    if (!coords)
                        throw std::runtime_error(
                            "differential value outside the target span");
                    for (int k = 0; k < ntv; ++k)
                        mat.at(k, int(i)) = (*coords)[size_t(k)];
                    ++kills;
                }
                // a truncated tower only supports a differential the
                // target truncation can absorb
                if (tracked && trusted) {
                    auto& tv = pg.at(tgt);
                    for (size_t i = 0; i < tws.size(); ++i) {
                        if (tws[i].height == 0)
                            continue;
                        for (int k = 0; k < ntv; ++k) {
                            auto c = mat.at(k, int(i));
                            if (c == 0)
                                continue;
                            if (ring.val(c) + tws[i].height <
                                eff_height(tv[size_t(k)], opt_.h0cap))
                                throw std::runtime_error(
                                    "differential overflows from a "
                                    "truncated tower: page " +
                                    std::to_string(r) + " at (" +
                                    std::to_string(b.first) + "," +
                                    std::to_string(b.second) + "), source " +
                                    poly_str(tws[i].head) + " height " +
                                    std::to_string(tws[i].height) +
                                    ", target " +
                                    poly_str(tv[size_t(k)].head) +
                                    " height " +
                                    std::to_string(tv[size_t(k)].height) +
                                    ", entry valuation " +
                                    std::to_string(ring.val(c)));
                        }
                    }
                }
                bout.emplace(b, std::move(mat));
            }
            // phase two: homology bidegree by bidegree
            std::map<Key, std::vector<Tower>> next;
            for (auto& [b, tws] : pg) {
                int ntw = int(tws.size());
                Mat<F4h> bs;
                {
                    const Mat<F4h>& m0 = bout.at(b);
                    bs = Mat<F4h>(m0.rows, m0.cols);
                    Key tgt{b.first - 1, b.second + 1};
                    for (int k = 0; k < m0.rows; ++k) {
                        int e = eff_height(pg.at(tgt)[size_t(k)], opt_.h0cap);
                        for (int j = 0; j < m0.cols; ++j)
                            bs.at(k, j) =
                                ring.shift(m0.at(k, j), opt_.h0cap - e);
                    }
                }
                Key src{b.first + 1, b.second - 1};
                const Mat<F4h>* bin =
                    bout.count(src) ? &bout.at(src) : nullptr;
                int acols = (bin ? bin->cols : 0);
                std::vector<int> trunc;
                for (int j = 0; j < ntw; ++j)
                    if (tws[size_t(j)].height)
                        trunc.push_back(j);
                Mat<F4h> ain(ntw, acols + int(trunc.size()));
                if (bin)
                    for (int i = 0; i < ntw; ++i)
                        for (int j = 0; j < acols; ++j)
                            ain.at(i, j) = bin->at(i, j);
                for (size_t t = 0; t < trunc.size(); ++t)
                    ain.at(trunc[t], acols + int(t)) = ring.shift(
                        ring.one(), tws[size_t(trunc[t])].height);
                auto H = homology(ring, bs, ain, opt_.pages);
                if (!H.alarms.empty()) {
                    std::string msg = "page " + std::to_string(r + 1) +
                                      " at (" + std::to_string(b.first) +
                                      "," + std::to_string(b.second) + "):";
                    for (auto& a : H.alarms)
                        msg += " " + a;
                    throw std::runtime_error(msg);
                }
                std::vector<Tower> fresh;
                for (size_t k = 0; k < H.orders.size(); ++k) {
                    Tower t;
                    t.height =
                        H.free_summand[k] ? 0 : H.orders[k];
                    Poly head;
                    for (int j = 0; j < ntw; ++j) {
                        auto cv = H.gens.at(j, int(k));
                        for (int w = 0; w < opt_.h0cap; ++w) {
                            F4 cf = ring.coeff(cv, w);
                            if (cf.is_zero())
                                continue;
                            if (cf.v != 1)
                                throw std::logic_error(
                                    "page generator leaves the prime field");
                            for (auto& term : tws[size_t(j)].head) {
                                Term q = term;
                                q.m.w += w;
                                head.push_back(q);
                            }
                        }
                    }
                    head = poly_mod2(head);
                    std::erase_if(head, [&](const Term& tm) {
                        return tm.m.w >= opt_.h0cap;
                    });
                    if (head.empty())
                        throw std::logic_error("empty tower head");
                    int minw = head[0].m.w;
                    for (auto& tm : head)
                        minw = std::min(minw, tm.m.w);
                    if (minw != 0)
                        throw std::logic_error(
                            "tower head at positive weight");
                    t.head = std::move(head);
                    fresh.push_back(std::move(t));
                }
                if (!fresh.empty())
                    next[b] = std::move(fresh);
            }
            std::ostringstream os;
            int towers = 0;
            for (auto& [b, tws] : next)
                towers += int(tws.size());
            os << "sector " << sec << " page " << r + 1 << ": "
               << next.size() << " bidegrees, " << towers << " towers, "
               << kills << " differentials";
            notes_.push_back(os.str());
            pg = std::move(next);
        }
        einf_[sec] = std::move(pg);
    }
};

} // namespace q8ss
