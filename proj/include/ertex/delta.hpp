#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "ertex/report.hpp"
#include "ertex/series.hpp"

namespace ertex {

/// Symbolic delta kernel
///
///     denom^-1 * delta((sf*first + ss*second) / denom)
///
/// expanded, per the binomial expansion convention, in nonnegative powers of
/// the second-listed numerator variable:
///
///     sum over n in Z, k >= 0 of
///         binom(n,k) * (sf*first)^(n-k) * (ss*second)^k * denom^(-n-1).
///
/// The kernel itself has infinite support; it is kept symbolic and only
/// queried through coefficient extraction, which is always a finite sum for
/// a fixed monomial.
struct DeltaKernel {
    VarId denom;
    VarId first;
    VarId second;
    int sign_first = 1;
    int sign_second = 1;

    /// Coefficient of denom^ea * first^eb * second^ec in the expansion.
    Rat coeff(int ea, int eb, int ec) const {
        int k = ec;
        if (k < 0) return Rat(0);
        long n = -static_cast<long>(ea) - 1;
        if (eb != n - k) return Rat(0);
        return binom(n, k) * Rat(sign_pow(sign_first, n - k) * sign_pow(sign_second, k));
    }
};

/// One summand of a formal delta expression: scalar * kernel * factor. The
/// kernel is optional; a plain Laurent-polynomial summand has none.
template <typename V>
struct DeltaTerm {
    Rat coeff = Rat(1);
    std::optional<DeltaKernel> kernel;
    Series<V> factor;
};

/// Finite sum of delta-kernel terms. Coefficients of individual monomials
/// are exact and finitely computable; whole-variable restrictions (residues)
/// may be infinite and then fail with NonSummable.
template <typename V>
struct DeltaSum {
    std::vector<DeltaTerm<V>> terms;

    void add(Rat c, std::optional<DeltaKernel> k, Series<V> f) {
        if (is_zero(c) || f.is_zero()) return;
        terms.push_back(DeltaTerm<V>{std::move(c), std::move(k), std::move(f)});
    }

    DeltaSum operator+(const DeltaSum& other) const {
        DeltaSum r = *this;
        for (auto& t : other.terms) r.terms.push_back(t);
        return r;
    }

    DeltaSum operator-() const {
        DeltaSum r = *this;
        for (auto& t : r.terms) t.coeff = -t.coeff;
        return r;
    }

    DeltaSum operator-(const DeltaSum& other) const { return *this + (-other); }
};

/// Exact coefficient of one monomial, together with the number of
/// (term, factor-monomial) pairs that contributed. The count certifies the
/// extraction was a finite sum.
template <typename V>
std::pair<V, long> delta_coeff(const DeltaSum<V>& e, const MultiIndex& idx) {
    V total{};
    long contributions = 0;
    for (const auto& term : e.terms) {
        if (!term.kernel) {
            V c = term.factor.coeff(idx);
            if (!is_zero(c)) {
                total = total + c * term.coeff;
                ++contributions;
            }
            continue;
        }
        const DeltaKernel& K = *term.kernel;
        for (const auto& [m, c] : term.factor.terms()) {
            // The kernel supplies exponents only on its three variables;
            // everything else must match the factor monomial exactly.
            bool match = true;
            for (const auto& [v, ev] : idx.entries()) {
                if (v == K.denom || v == K.first || v == K.second) continue;
                if (m.get(v) != ev) { match = false; break; }
            }
            if (!match) continue;
            for (const auto& [v, ev] : m.entries()) {
                if (v == K.denom || v == K.first || v == K.second) continue;
                if (idx.get(v) != ev) { match = false; break; }
            }
            if (!match) continue;
            Rat kc = K.coeff(idx.get(K.denom) - m.get(K.denom),
                             idx.get(K.first) - m.get(K.first),
                             idx.get(K.second) - m.get(K.second));
            if (is_zero(kc)) continue;
            total = total + c * (kc * term.coeff);
            ++contributions;
        }
    }
    return {std::move(total), contributions};
}

/// All coefficients of a delta expression inside a window, computed by
/// enumerating every kernel monomial that can land in the window. Within
/// the window this is exact.
template <typename V>
Series<V> delta_restrict(const DeltaSum<V>& e, const DegreeWindow& window) {
    Series<V> acc;
    for (const auto& term : e.terms) {
        if (!term.kernel) {
            for (const auto& [m, c] : term.factor.terms())
                if (window.contains(m)) acc.add_term(m, c * term.coeff);
            continue;
        }
        const DeltaKernel& K = *term.kernel;
        for (const auto& [m, c] : term.factor.terms()) {
            const auto [alo, ahi] = window.bound(K.denom);
            const auto [blo, bhi] = window.bound(K.first);
            const auto [clo, chi] = window.bound(K.second);
            int klo = std::max(0, clo - m.get(K.second));
            int khi = chi - m.get(K.second);
            // n is pinned by the window on both denom (n = -ea-1) and first
            // (eb = n-k) exponents.
            long na_lo = m.get(K.denom) - static_cast<long>(ahi) - 1;
            long na_hi = m.get(K.denom) - static_cast<long>(alo) - 1;
            for (int k = klo; k <= khi; ++k) {
                long nb_lo = static_cast<long>(blo) - m.get(K.first) + k;
                long nb_hi = static_cast<long>(bhi) - m.get(K.first) + k;
                long nlo = std::max(na_lo, nb_lo);
                long nhi = std::min(na_hi, nb_hi);
                for (long n = nlo; n <= nhi; ++n) {
                    Rat kc = binom(n, k) *
                             Rat(sign_pow(K.sign_first, n - k) * sign_pow(K.sign_second, k));
                    if (is_zero(kc)) continue;
                    MultiIndex idx = m.plus_var(K.denom, static_cast<int>(-n - 1))
                                         .plus_var(K.first, static_cast<int>(n - k))
                                         .plus_var(K.second, k);
                    if (!window.contains(idx)) continue;
                    acc.add_term(std::move(idx), c * (kc * term.coeff));
                }
            }
        }
    }
    return acc;
}

/// Windowed comparison: pass iff every coefficient inside the window agrees.
template <typename V, typename Render>
Report delta_equal(const DeltaSum<V>& a, const DeltaSum<V>& b, const DegreeWindow& window,
                   const std::string& axiom, const std::string& subject, Render render) {
    Report report;
    Series<V> diff = delta_restrict(a - b, window);
    for (const auto& [m, c] : diff.terms()) {
        V expected = delta_coeff(b, m).first;
        report.add(axiom, subject, to_string(m), render(expected),
                   render(expected + c));
    }
    return report;
}

inline Report delta_equal(const DeltaSum<Rat>& a, const DeltaSum<Rat>& b,
                          const DegreeWindow& window, const std::string& axiom = "equality",
                          const std::string& subject = "") {
    return delta_equal(a, b, window, axiom, subject,
                       [](const Rat& r) { return to_string(r); });
}

/// Left side of the two-term delta identity
///   x1^-1 delta((x2+x0)/x1) - x2^-1 delta((x1-x0)/x2) = 0.
inline DeltaSum<Rat> delta_two_term_identity() {
    VarId X0 = var("x0"), X1 = var("x1"), X2 = var("x2");
    DeltaSum<Rat> e;
    e.add(Rat(1), DeltaKernel{X1, X2, X0, 1, 1}, LaurentPoly::constant(Rat(1)));
    e.add(Rat(-1), DeltaKernel{X2, X1, X0, 1, -1}, LaurentPoly::constant(Rat(1)));
    return e;
}

/// Left side of the three-term delta identity
///   x0^-1 delta((x1-x2)/x0) - x0^-1 delta((-x2+x1)/x0)
///                           - x1^-1 delta((x2+x0)/x1) = 0.
inline DeltaSum<Rat> delta_three_term_identity() {
    VarId X0 = var("x0"), X1 = var("x1"), X2 = var("x2");
    DeltaSum<Rat> e;
    e.add(Rat(1), DeltaKernel{X0, X1, X2, 1, -1}, LaurentPoly::constant(Rat(1)));
    e.add(Rat(-1), DeltaKernel{X0, X2, X1, -1, 1}, LaurentPoly::constant(Rat(1)));
    e.add(Rat(-1), DeltaKernel{X1, X2, X0, 1, 1}, LaurentPoly::constant(Rat(1)));
    return e;
}

/// Coefficient of v^-1 in the whole expression, as a Laurent polynomial in
/// the remaining variables. Throws NonSummable when the restriction is an
/// infinite sum (the result would not be finitely supported).
template <typename V>
Series<V> delta_residue(const DeltaSum<V>& e, VarId v) {
    Series<V> acc;
    for (const auto& term : e.terms) {
        if (!term.kernel) {
            acc = acc + term.factor.residue(v).scaled(term.coeff);
            continue;
        }
        const DeltaKernel& K = *term.kernel;
        for (const auto& [m, c] : term.factor.terms()) {
            if (v == K.denom) {
                // ea = -1 - m_a pins n = m_a; finite iff n >= 0 (else binom
                // (n,k) stays nonzero for every k).
                long n = m.get(K.denom);
                if (n < 0)
                    throw NonSummable("residue in " + var_name(v) +
                                      " has infinitely many kernel contributions");
                for (long k = 0; k <= n; ++k) {
                    Rat kc = binom(n, k) *
                             Rat(sign_pow(K.sign_first, n - k) * sign_pow(K.sign_second, k));
                    if (is_zero(kc)) continue;
                    MultiIndex idx = m.without(K.denom)
                                         .plus_var(K.first, static_cast<int>(n - k))
                                         .plus_var(K.second, static_cast<int>(k));
                    acc.add_term(std::move(idx), c * (kc * term.coeff));
                }
            } else if (v == K.first) {
                // eb = n-k = -1 - m_b; finite iff eb < 0.
                long eb = -1 - static_cast<long>(m.get(K.first));
                if (eb >= 0)
                    throw NonSummable("residue in " + var_name(v) +
                                      " has infinitely many kernel contributions");
                for (long k = 0; k < -eb; ++k) {
                    long n = k + eb;
                    Rat kc = binom(n, k) *
                             Rat(sign_pow(K.sign_first, n - k) * sign_pow(K.sign_second, k));
                    if (is_zero(kc)) continue;
                    MultiIndex idx = m.without(K.first)
                                         .plus_var(K.denom, static_cast<int>(-n - 1))
                                         .plus_var(K.second, static_cast<int>(k));
                    acc.add_term(std::move(idx), c * (kc * term.coeff));
                }
            } else if (v == K.second) {
                // ec = k = -1 - m_c; a nonnegative k leaves n unconstrained.
                long k = -1 - static_cast<long>(m.get(K.second));
                if (k >= 0)
                    throw NonSummable("residue in " + var_name(v) +
                                      " has infinitely many kernel contributions");
                // k < 0: no contribution.
            } else {
                if (m.get(v) == -1)
                    throw NonSummable("residue in " + var_name(v) +
                                      " leaves a delta kernel in the result");
            }
        }
    }
    return acc;
}

enum class DeltaSubstitution {
    kDenomToSum,     // replace x by (y+z) in the factor of x^-1 delta((y+z)/x)
    kFirstToDiff,    // replace y by (x-z)
};

/// Rewrites the factor of a (y+z)/x delta kernel using the substitution
/// property: delta((y+z)/x) f(x,y,z) = delta((y+z)/x) f(y+z,y,z)
///                                   = delta((y+z)/x) f(x,x-z,z).
/// Requires a lone kernel with both numerator signs positive, and the
/// substituted variable must appear only with nonnegative exponents, so
/// that the rewritten factor is again finitely supported.
template <typename V>
DeltaSum<V> delta_substitute(const DeltaSum<V>& e, DeltaSubstitution target) {
    DeltaSum<V> out;
    for (const auto& term : e.terms) {
        if (!term.kernel) {
            out.terms.push_back(term);
            continue;
        }
        const DeltaKernel& K = *term.kernel;
        if (K.sign_first != 1 || K.sign_second != 1)
            throw HypothesisViolated("substitution requires a (y+z)/x shaped kernel");
        VarId from = (target == DeltaSubstitution::kDenomToSum) ? K.denom : K.first;
        if (term.factor.min_exp(from) < 0)
            throw HypothesisViolated("factor has negative powers of " + var_name(from) +
                                     "; truncation hypothesis not certifiable");
        // Degree growth is bounded by the factor's own exponents, so an
        // exact window suffices for the expansion.
        int deg = term.factor.max_exp(from);
        DegreeWindow win;
        win.set(K.second, -deg - 1, deg + 1);
        Series<V> rewritten;
        for (const auto& [m, c] : term.factor.terms()) {
            int exp = m.get(from);
            MultiIndex base = m.without(from);
            LaurentPoly repl;
            if (target == DeltaSubstitution::kDenomToSum) {
                repl = expand_power(K.first, K.second, 1, exp, win);
            } else {
                repl = expand_power(K.denom, K.second, -1, exp, win);
            }
            rewritten = rewritten + repl * Series<V>::monomial(base, c);
        }
        out.add(term.coeff, K, std::move(rewritten));
    }
    return out;
}

}  // namespace ertex
