#pragma once

#include <cassert>
#include <map>
#include <string>
#include <utility>

#include "ertex/rational.hpp"
#include "ertex/variables.hpp"

namespace ertex {

namespace detail {

// Dispatches to the coefficient type's is_zero via ADL; kept out of class
// scope where the member of the same name would shadow it.
template <typename V>
bool coeff_is_zero(const V& v) {
    return is_zero(v);
}

}  // namespace detail

/// Finitely supported formal Laurent polynomial with coefficients in V
/// (exact rationals, or vector-space elements). Zero coefficients are never
/// stored, so operator== is mathematical equality. Values are immutable in
/// spirit: every operation returns a fresh series.
template <typename V>
class Series {
public:
    using Map = std::map<MultiIndex, V>;

    Series() = default;

    static Series monomial(MultiIndex m, V c) {
        Series s;
        s.add_term(std::move(m), std::move(c));
        return s;
    }

    static Series constant(V c) { return monomial(MultiIndex{}, std::move(c)); }

    const Map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    V coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? V{} : it->second;
    }

    void add_term(MultiIndex m, V c) {
        if (detail::coeff_is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(std::move(m), c);
        if (!inserted) {
            it->second = it->second + c;
            if (detail::coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    Series operator+(const Series& other) const {
        Series r = *this;
        for (auto& [m, c] : other.terms_) r.add_term(m, c);
        return r;
    }

    Series operator-() const {
        Series r;
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Series operator-(const Series& other) const { return *this + (-other); }

    Series scaled(const Rat& a) const {
        Series r;
        if (detail::coeff_is_zero(a)) return r;
        for (auto& [m, c] : terms_) {
            V v = c * a;
            if (!detail::coeff_is_zero(v)) r.terms_.emplace(m, std::move(v));
        }
        return r;
    }

    bool operator==(const Series& other) const { return terms_ == other.terms_; }

    /// Formal derivative in v, applied `order` times: c*v^n -> c*n*v^(n-1).
    Series derive(VarId v, int order = 1) const {
        assert(order >= 0);
        Series cur = *this;
        for (int step = 0; step < order; ++step) {
            Series next;
            for (auto& [m, c] : cur.terms_) {
                int e = m.get(v);
                if (e == 0) continue;
                next.add_term(m.plus_var(v, -1), c * Rat(e));
            }
            cur = std::move(next);
        }
        return cur;
    }

    /// Coefficient of v^-1 as a series in the remaining variables.
    Series residue(VarId v) const {
        Series r;
        for (auto& [m, c] : terms_) {
            if (m.get(v) == -1) r.add_term(m.without(v), c);
        }
        return r;
    }

    int min_exp(VarId v) const {
        bool seen = false;
        int lo = 0;
        for (auto& [m, c] : terms_) {
            int e = m.get(v);
            if (!seen || e < lo) lo = e, seen = true;
        }
        return lo;
    }

    int max_exp(VarId v) const {
        bool seen = false;
        int hi = 0;
        for (auto& [m, c] : terms_) {
            int e = m.get(v);
            if (!seen || e > hi) hi = e, seen = true;
        }
        return hi;
    }

private:
    Map terms_;
};

template <typename V>
inline bool is_zero(const Series<V>& s) {
    return s.is_zero();
}

using LaurentPoly = Series<Rat>;

/// Module action of scalar Laurent polynomials on a V-valued series.
template <typename V>
Series<V> operator*(const Series<Rat>& a, const Series<V>& b) {
    Series<V> r;
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) r.add_term(ma.plus(mb), cb * ca);
    return r;
}

inline LaurentPoly operator*(const LaurentPoly& a, const Rat& c) { return a.scaled(c); }

/// (first + sign*second)^n under the binomial expansion convention: expanded
/// in nonnegative powers of the second-listed variable, truncated to the
/// window's bound on `second`. Exact (no truncation) when 0 <= n <= hi.
inline LaurentPoly expand_power(VarId first, VarId second, int sign, int n,
                                const DegreeWindow& window) {
    assert(first != second);
    LaurentPoly r;
    int khi = window.hi(second);
    if (n >= 0 && n < khi) khi = n;
    for (int k = 0; k <= khi; ++k) {
        Rat c = binom(n, k) * Rat(sign_pow(sign, k));
        if (is_zero(c)) continue;
        r.add_term(MultiIndex{{first, n - k}, {second, k}}, c);
    }
    return r;
}

/// e^{sign*shift*d/dv} p: replaces v by (v + sign*shift) under the binomial
/// expansion convention. Truncates so no monomial exceeds the window's upper
/// bound in the shift variable; exact when all v-exponents are nonnegative
/// (and the window is wide enough to hold them).
template <typename V>
Series<V> taylor_shift(const Series<V>& p, VarId v, VarId shift,
                       const DegreeWindow& window, int sign = 1) {
    assert(v != shift);
    Series<V> r;
    int shift_hi = window.hi(shift);
    for (auto& [m, c] : p.terms()) {
        int e = m.get(v);
        int have = m.get(shift);
        int khi = shift_hi - have;
        if (e >= 0 && e < khi) khi = e;
        MultiIndex base = m.without(v);
        for (int k = 0; k <= khi; ++k) {
            Rat b = binom(e, k) * Rat(sign_pow(sign, k));
            if (is_zero(b)) continue;
            MultiIndex idx = base.plus_var(v, e - k).plus_var(shift, k);
            r.add_term(std::move(idx), c * b);
        }
    }
    return r;
}

/// Restriction of a series to the monomials inside a window.
template <typename V>
Series<V> truncate(const Series<V>& p, const DegreeWindow& window) {
    Series<V> r;
    for (auto& [m, c] : p.terms())
        if (window.contains(m)) r.add_term(m, c);
    return r;
}

inline std::string to_string(const LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (auto& [m, c] : p.terms()) {
        if (!s.empty()) s += " + ";
        if (m.empty()) {
            s += to_string(c);
        } else if (c == Rat(1)) {
            s += to_string(m);
        } else {
            s += to_string(c) + "*" + to_string(m);
        }
    }
    return s;
}

}  // namespace ertex
