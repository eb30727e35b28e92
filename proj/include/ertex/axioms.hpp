#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "ertex/delta.hpp"
#include "ertex/presentation.hpp"

namespace ertex {

/// Options shared by the axiom checkers. The window only limits
/// delta-kernel comparisons; it is widened automatically to the computed
/// support bound plus a safety margin, so desk-scale checks cover the whole
/// region where the finite data interacts.
struct CheckOptions {
    DegreeWindow window;
    int nilpotence_bound = kDefaultNilpotenceBound;
};

using VectorSeries = Series<VectorElem>;

inline VectorSeries to_series(const VSeries& s, VarId v) {
    VectorSeries r;
    for (auto& [e, vec] : s) r.add_term(MultiIndex{{v, e}}, vec);
    return r;
}

/// Y(u, outvar) applied to every coefficient of f.
inline VectorSeries apply_Y(const Presentation& p, const VectorElem& u,
                            const VectorSeries& f, VarId outvar) {
    VectorSeries r;
    for (auto& [m, vec] : f.terms())
        for (auto& [e, val] : vertex_series(p, u, vec))
            r.add_term(m.plus_var(outvar, e), val);
    return r;
}

/// e^{shiftvar * D} applied to every coefficient of f.
inline VectorSeries exp_D_coeffwise(const Presentation& p, const VectorSeries& f,
                                    VarId shiftvar, int bound) {
    VectorSeries r;
    for (auto& [m, vec] : f.terms())
        for (auto& [k, dv] : exp_D(p, vec, bound)) r.add_term(m.plus_var(shiftvar, k), dv);
    return r;
}

inline int support_bound(std::initializer_list<const VectorSeries*> series) {
    int b = 0;
    for (const VectorSeries* s : series)
        for (auto& [m, c] : s->terms())
            for (auto& [v, e] : m.entries()) b = std::max(b, std::abs(e));
    return b;
}

inline DegreeWindow widen_window(const DegreeWindow& user, int bound,
                                 std::initializer_list<VarId> vars) {
    DegreeWindow w = user;
    for (VarId v : vars) {
        auto [lo, hi] = user.bound(v);
        w.set(v, std::min(lo, -(bound + 2)), std::max(hi, bound + 2));
    }
    return w;
}

namespace detail {

inline void series_compare(Report& report, const Presentation& p,
                           const VectorSeries& actual, const VectorSeries& expected,
                           const DegreeWindow& window, const std::string& axiom,
                           const std::string& subject) {
    VectorSeries diff = truncate(actual, window) - truncate(expected, window);
    for (auto& [m, c] : diff.terms())
        report.add(axiom, subject, to_string(m),
                   to_string(truncate(expected, window).coeff(m), p.basis),
                   to_string(truncate(actual, window).coeff(m), p.basis));
}

}  // namespace detail

/// Finite support is built into the data model; when declared support
/// bounds are present, every stored entry must respect them.
inline Report check_truncation(const Presentation& p) {
    Report report;
    if (!p.declared_support) return report;
    for (auto& [ij, pairmodes] : p.modes.all()) {
        auto it = p.declared_support->find(ij);
        auto [i, j] = ij;
        for (auto& [n, val] : pairmodes) {
            if (it == p.declared_support->end() || n < it->second.first ||
                n > it->second.second) {
                report.add("truncation",
                           p.basis.name(i) + "," + p.basis.name(j),
                           "mode " + std::to_string(n), "inside declared support",
                           "outside");
            }
        }
    }
    return report;
}

/// The Jacobi identity, applied to w and compared coefficientwise on the
/// (auto-widened) window:
///
///   x0^-1 d((x1-x2)/x0) Y(u,x1)Y(v,x2)w - x0^-1 d((-x2+x1)/x0) Y(v,x2)Y(u,x1)w
///     = x1^-1 d((x2+x0)/x1) Y(Y(u,x0)v,x2)w.
inline Report check_jacobi(const Presentation& p, const DegreeWindow& window = {}) {
    Report report;
    VarId X0 = var("x0"), X1 = var("x1"), X2 = var("x2");
    auto render = [&](const VectorElem& v) { return to_string(v, p.basis); };
    for (int a = 0; a < p.dim(); ++a) {
        VectorElem u = VectorElem::unit(a);
        for (int b = 0; b < p.dim(); ++b) {
            VectorElem v = VectorElem::unit(b);
            for (int c = 0; c < p.dim(); ++c) {
                VectorElem w = VectorElem::unit(c);
                VectorSeries f1 = apply_Y(p, u, to_series(vertex_series(p, v, w), X2), X1);
                VectorSeries f2 = apply_Y(p, v, to_series(vertex_series(p, u, w), X1), X2);
                VectorSeries rhs_factor;
                for (auto& [e0, vec] : vertex_series(p, u, v))
                    for (auto& [e2, val] : vertex_series(p, vec, w))
                        rhs_factor.add_term(MultiIndex{{X0, e0}, {X2, e2}}, val);

                DeltaSum<VectorElem> lhs, rhs;
                lhs.add(Rat(1), DeltaKernel{X0, X1, X2, 1, -1}, f1);
                lhs.add(Rat(-1), DeltaKernel{X0, X2, X1, -1, 1}, f2);
                rhs.add(Rat(1), DeltaKernel{X1, X2, X0, 1, 1}, rhs_factor);

                int bound = support_bound({&f1, &f2, &rhs_factor});
                DegreeWindow w_eff = widen_window(window, bound, {X0, X1, X2});
                std::string subject =
                    p.basis.name(a) + "," + p.basis.name(b) + "," + p.basis.name(c);
                report.merge(delta_equal(lhs, rhs, w_eff, "jacobi", subject, render));
            }
        }
    }
    return report;
}

/// Y(Y(u,x0)v, x2) = Y(Y(v,-x0)u, x2+x0), verified by acting on every basis
/// vector; the right side is expanded in nonnegative powers of x0.
inline Report check_vfss(const Presentation& p, const DegreeWindow& window = {}) {
    Report report;
    VarId X0 = var("x0"), X2 = var("x2");
    for (int a = 0; a < p.dim(); ++a) {
        VectorElem u = VectorElem::unit(a);
        for (int b = 0; b < p.dim(); ++b) {
            VectorElem v = VectorElem::unit(b);
            for (int c = 0; c < p.dim(); ++c) {
                VectorElem w = VectorElem::unit(c);
                VectorSeries lhs, rhs_base;
                for (auto& [e, vec] : vertex_series(p, u, v))
                    for (auto& [e2, val] : vertex_series(p, vec, w))
                        lhs.add_term(MultiIndex{{X0, e}, {X2, e2}}, val);
                for (auto& [e, vec] : vertex_series(p, v, u)) {
                    Rat sign(sign_pow(-1, e));
                    for (auto& [e2, val] : vertex_series(p, vec, w))
                        rhs_base.add_term(MultiIndex{{X0, e}, {X2, e2}}, val * sign);
                }
                int bound = support_bound({&lhs, &rhs_base});
                DegreeWindow w_eff = widen_window(window, bound, {X0, X2});
                VectorSeries rhs = taylor_shift(rhs_base, X2, X0, w_eff);
                detail::series_compare(report, p, lhs, rhs, w_eff, "vacuum-free skew-symmetry",
                                       p.basis.name(a) + "," + p.basis.name(b) + "," +
                                           p.basis.name(c));
            }
        }
    }
    return report;
}

/// Global D-derivative property Y(e^{zD}u, x)v = Y(u, x+z)v, coefficientwise
/// in x and z.
inline Report check_D_derivative(const Presentation& p, const DegreeWindow& window = {},
                                 int nilpotence_bound = kDefaultNilpotenceBound) {
    Report report;
    if (!p.derivation) throw NotApplicable("D-derivative check needs a derivation");
    VarId X = var("x"), Z = var("z");
    for (int a = 0; a < p.dim(); ++a) {
        VectorElem u = VectorElem::unit(a);
        std::map<int, VectorElem> eu = exp_D(p, u, nilpotence_bound);
        for (int b = 0; b < p.dim(); ++b) {
            VectorElem v = VectorElem::unit(b);
            VectorSeries lhs;
            for (auto& [k, du] : eu)
                for (auto& [e, val] : vertex_series(p, du, v))
                    lhs.add_term(MultiIndex{{X, e}, {Z, k}}, val);
            VectorSeries base = to_series(vertex_series(p, u, v), X);
            int bound = support_bound({&lhs, &base});
            DegreeWindow w_eff = widen_window(window, bound, {X, Z});
            VectorSeries rhs = taylor_shift(base, X, Z, w_eff);
            detail::series_compare(report, p, lhs, rhs, w_eff, "D-derivative",
                                   p.basis.name(a) + "," + p.basis.name(b));
        }
    }
    return report;
}

/// Global D-bracket derivative formula e^{zD} Y(u,x)v = Y(u, x+z) e^{zD}v,
/// coefficientwise in x and z.
inline Report check_D_bracket(const Presentation& p, const DegreeWindow& window = {},
                              int nilpotence_bound = kDefaultNilpotenceBound) {
    Report report;
    if (!p.derivation) throw NotApplicable("D-bracket check needs a derivation");
    VarId X = var("x"), Z = var("z");
    for (int a = 0; a < p.dim(); ++a) {
        VectorElem u = VectorElem::unit(a);
        for (int b = 0; b < p.dim(); ++b) {
            VectorElem v = VectorElem::unit(b);
            VectorSeries base = to_series(vertex_series(p, u, v), X);
            VectorSeries lhs = exp_D_coeffwise(p, base, Z, nilpotence_bound);
            std::map<int, VectorElem> ev = exp_D(p, v, nilpotence_bound);
            VectorSeries rhs_base;
            for (auto& [j, dv] : ev)
                for (auto& [e, val] : vertex_series(p, u, dv))
                    rhs_base.add_term(MultiIndex{{X, e}, {Z, j}}, val);
            int bound = support_bound({&lhs, &rhs_base});
            DegreeWindow w_eff = widen_window(window, bound, {X, Z});
            VectorSeries rhs = taylor_shift(rhs_base, X, Z, w_eff);
            detail::series_compare(report, p, lhs, rhs, w_eff, "D-bracket",
                                   p.basis.name(a) + "," + p.basis.name(b));
        }
    }
    return report;
}

/// Both global derivation compatibilities, reported per sub-identity.
inline Report check_D_compat(const Presentation& p, const DegreeWindow& window = {},
                             int nilpotence_bound = kDefaultNilpotenceBound) {
    Report report = check_D_derivative(p, window, nilpotence_bound);
    report.merge(check_D_bracket(p, window, nilpotence_bound));
    return report;
}

/// Skew-symmetry Y(u,x)v = e^{xD} Y(v,-x)u. Both sides are finite, so the
/// comparison is exact with no window.
inline Report check_skew_symmetry(const Presentation& p,
                                  int nilpotence_bound = kDefaultNilpotenceBound) {
    Report report;
    if (!p.derivation) throw NotApplicable("skew-symmetry check needs a derivation");
    VarId X = var("x");
    for (int a = 0; a < p.dim(); ++a) {
        VectorElem u = VectorElem::unit(a);
        for (int b = 0; b < p.dim(); ++b) {
            VectorElem v = VectorElem::unit(b);
            VectorSeries lhs = to_series(vertex_series(p, u, v), X);
            VectorSeries flipped;
            for (auto& [e, vec] : vertex_series(p, v, u))
                flipped.add_term(MultiIndex{{X, e}}, vec * Rat(sign_pow(-1, e)));
            VectorSeries rhs = exp_D_coeffwise(p, flipped, X, nilpotence_bound);
            VectorSeries diff = lhs - rhs;
            for (auto& [m, c] : diff.terms())
                report.add("skew-symmetry", p.basis.name(a) + "," + p.basis.name(b),
                           to_string(m), to_string(rhs.coeff(m), p.basis),
                           to_string(lhs.coeff(m), p.basis));
        }
    }
    return report;
}

/// Vacuum property Y(1,x)v = v, creation property Y(u,x)1 in V[[x]] with
/// constant term u, and strong creation Y(u,x)1 = e^{xD}u when a derivation
/// is present.
inline Report check_vacuum_creation(const Presentation& p,
                                    int nilpotence_bound = kDefaultNilpotenceBound) {
    Report report;
    if (p.kind != Kind::vertex || !p.vacuum) {
        report.add("vacuum", p.name, "", "vertex presentation with vacuum", "missing");
        return report;
    }
    VectorElem one = VectorElem::unit(*p.vacuum);
    for (int b = 0; b < p.dim(); ++b) {
        VectorElem v = VectorElem::unit(b);
        VSeries s = vertex_series(p, one, v);
        VSeries want;
        want[0] = v;
        if (s != want)
            report.add("vacuum property", p.basis.name(b), "",
                       to_string(want, p.basis), to_string(s, p.basis));
    }
    for (int a = 0; a < p.dim(); ++a) {
        VectorElem u = VectorElem::unit(a);
        VSeries s = vertex_series(p, u, one);
        for (auto& [e, vec] : s)
            if (e < 0)
                report.add("creation property", p.basis.name(a),
                           "x^" + std::to_string(e), "0 (no negative powers)",
                           to_string(vec, p.basis));
        VectorElem at0 = s.count(0) ? s[0] : VectorElem{};
        if (!(at0 == u))
            report.add("creation property", p.basis.name(a), "x^0",
                       to_string(u, p.basis), to_string(at0, p.basis));
        if (p.derivation) {
            VSeries expect;
            for (auto& [k, dv] : exp_D(p, u, nilpotence_bound)) expect[k] = dv;
            if (s != expect)
                report.add("strong creation", p.basis.name(a), "",
                           to_string(expect, p.basis), to_string(s, p.basis));
        }
    }
    return report;
}

/// The map u -> Y(u,x) restricted to basis probes has trivial kernel; an
/// exact rational rank computation with a kernel witness on failure.
inline Report check_injectivity(const Presentation& p) {
    Report report;
    std::vector<SeriesFamily> members;
    members.reserve(p.dim());
    for (int i = 0; i < p.dim(); ++i) {
        SeriesFamily f;
        for (int j = 0; j < p.dim(); ++j)
            f.action.push_back(vertex_series(p, VectorElem::unit(i), VectorElem::unit(j)));
        members.push_back(std::move(f));
    }
    std::vector<const SeriesFamily*> all;
    for (auto& f : members) all.push_back(&f);
    auto keys = detail::family_keys(all);
    RatMat a(static_cast<int>(keys.size()), p.dim());
    for (std::size_t r = 0; r < keys.size(); ++r)
        for (int c = 0; c < p.dim(); ++c)
            a.at(static_cast<int>(r), c) = detail::family_entry(members[c], keys[r]);
    auto kernel = kernel_vector(a);
    if (kernel) {
        VectorElem witness;
        for (int c = 0; c < p.dim(); ++c) witness.add_coord(c, (*kernel)[c]);
        report.add("injectivity", to_string(witness, p.basis), "",
                   "Y(u,x) = 0 only for u = 0", "vertex operator vanishes");
    }
    return report;
}

/// Every checker applicable to the presentation's kind.
inline Report check_all(const Presentation& p, const CheckOptions& opts = {}) {
    Report report = validate(p, opts.nilpotence_bound);
    if (!report.pass()) return report;
    report.merge(check_truncation(p));
    report.merge(check_jacobi(p, opts.window));
    report.merge(check_vfss(p, opts.window));
    if (p.kind != Kind::ertex && p.derivation) {
        report.merge(check_D_compat(p, opts.window, opts.nilpotence_bound));
        report.merge(check_skew_symmetry(p, opts.nilpotence_bound));
    }
    if (p.kind == Kind::vertex) {
        report.merge(check_vacuum_creation(p, opts.nilpotence_bound));
        report.merge(check_injectivity(p));
    }
    return report;
}

}  // namespace ertex
