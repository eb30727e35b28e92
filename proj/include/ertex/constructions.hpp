#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ertex/axioms.hpp"
#include "ertex/presentation.hpp"

namespace ertex {

/// An embedding of one presentation into another, as the linear map sending
/// each source basis element to its image.
struct EmbeddingWitness {
    Presentation source;
    Presentation target;
    LinearMap inclusion;
};

/// Record of the derivative-closure sweep: which formal derivatives became
/// new basis elements (accepted) and which collapsed to a combination of
/// earlier ones (rejected, with the combination over the output basis).
struct ClosureTrace {
    std::vector<std::pair<std::string, int>> accepted;           // (basis id, order)
    std::map<std::pair<std::string, int>, VectorElem> rejected;  // combination over output
};

/// Homomorphism check: f(Y_a(u,x)v) = Y_b(f u, x) f v on all basis pairs,
/// plus the kind-specific clause (derivation compatibility for d-ertex,
/// vacuum preservation for vertex).
inline Report check_hom(const LinearMap& f, const Presentation& a, const Presentation& b,
                        Kind kind) {
    Report report;
    if (f.domain_dim() != a.dim())
        throw UnknownBasisId("map is not total on the source basis");
    for (int i = 0; i < a.dim(); ++i) {
        for (int j = 0; j < a.dim(); ++j) {
            VSeries src = vertex_series(a, VectorElem::unit(i), VectorElem::unit(j));
            VSeries lhs;
            for (auto& [e, vec] : src) {
                VectorElem img = apply_linear(f, vec);
                if (!img.is_zero()) lhs[e] = std::move(img);
            }
            VSeries rhs = vertex_series(b, f.image(i), f.image(j));
            if (lhs != rhs)
                report.add("homomorphism", a.basis.name(i) + "," + a.basis.name(j), "",
                           to_string(rhs, b.basis), to_string(lhs, b.basis));
        }
    }
    if (kind == Kind::dertex || kind == Kind::vertex) {
        if (!a.derivation || !b.derivation) {
            if (kind == Kind::dertex)
                report.add("derivation compatibility", a.name + " -> " + b.name, "",
                           "derivations on both sides", "missing");
        } else {
            for (int i = 0; i < a.dim(); ++i) {
                VectorElem lhs = apply_linear(f, a.derivation->image(i));
                VectorElem rhs = apply_linear(*b.derivation, f.image(i));
                if (!(lhs == rhs))
                    report.add("derivation compatibility", a.basis.name(i), "",
                               to_string(rhs, b.basis), to_string(lhs, b.basis));
            }
        }
    }
    if (kind == Kind::vertex) {
        if (!a.vacuum || !b.vacuum) {
            report.add("vacuum preservation", a.name + " -> " + b.name, "",
                       "vacuum on both sides", "missing");
        } else {
            VectorElem lhs = f.image(*a.vacuum);
            VectorElem rhs = VectorElem::unit(*b.vacuum);
            if (!(lhs == rhs))
                report.add("vacuum preservation", a.basis.name(*a.vacuum), "",
                           to_string(rhs, b.basis), to_string(lhs, b.basis));
        }
    }
    return report;
}

namespace detail {

inline std::string fresh_name(const Basis& basis, const std::string& stem) {
    for (int k = 0;; ++k) {
        std::string candidate = stem + std::to_string(k);
        if (!basis.contains(candidate)) return candidate;
    }
}

}  // namespace detail

/// Adjoins a fresh vacuum element to a d-ertex algebra:
///   Y(u,x)1 = e^{xD}u  and  Y(1,x)u = u,
/// the old structure untouched, D extended by D(1) = 0. The result is a
/// vertex presentation one dimension larger, even if the input already had
/// a unit-like element.
inline std::pair<Presentation, EmbeddingWitness> adjoin_vacuum(
    const Presentation& p, const CheckOptions& opts = {}) {
    if (p.kind != Kind::dertex)
        throw PreconditionFailed("vacuum adjunction expects a d-ertex presentation");
    Report pre = validate(p, opts.nilpotence_bound);
    if (pre.pass()) pre.merge(check_jacobi(p, opts.window));
    if (pre.pass()) pre.merge(check_skew_symmetry(p, opts.nilpotence_bound));
    if (pre.pass()) pre.merge(check_D_compat(p, opts.window, opts.nilpotence_bound));
    if (!pre.pass())
        throw PreconditionFailed("input fails the d-ertex axiom suite", pre);

    Presentation out;
    out.name = p.name + "_vac";
    out.kind = Kind::vertex;
    out.basis = p.basis;
    const std::string vac_name = detail::fresh_name(out.basis, "vac");
    int vac = out.basis.add(vac_name);
    out.vacuum = vac;
    out.modes = p.modes;

    LinearMap d(out.basis.dim());
    for (int i = 0; i < p.dim(); ++i) d.set_image(i, p.derivation->image(i));
    d.set_image(vac, VectorElem{});
    out.derivation = std::move(d);

    for (int i = 0; i < p.dim(); ++i) {
        for (auto& [k, dv] : exp_D(p, VectorElem::unit(i), opts.nilpotence_bound))
            out.modes.set(i, vac, -k - 1, dv);
    }
    for (int j = 0; j < out.basis.dim(); ++j)
        out.modes.set(vac, j, -1, VectorElem::unit(j));

    EmbeddingWitness witness{p, out, LinearMap::identity(p.dim())};
    return {std::move(out), std::move(witness)};
}

struct ClosureResult {
    Presentation algebra;
    EmbeddingWitness witness;
    ClosureTrace trace;
};

/// Derivative closure of an injective ertex algebra: formal derivatives
/// D^[n]e_i are adjoined as long as their operator families
/// (d/dx)^n Y(e_i,x) are independent of everything accepted so far; a
/// dependent family instead defines the derivation on its parent. The sweep
/// is greedy in (order, basis index), so the result is deterministic. The
/// enlarged vertex operator map is
///   Y'(D^[n]e_i, x) D^[m]e_j = (d/dx)^n (D - d/dx)^m Y(e_i,x)e_j
/// with D acting on coefficients.
inline ClosureResult d_closure(const Presentation& p, int max_order = 8) {
    if (p.kind != Kind::ertex)
        throw PreconditionFailed("derivative closure expects an ertex presentation");
    Report inj = check_injectivity(p);
    if (!inj.pass())
        throw PreconditionFailed("derivative closure needs an injective input", inj);

    const int n0 = p.dim();
    struct Element {
        int orig;
        int order;
        SeriesFamily family;
    };
    std::vector<Element> accepted;
    for (int i = 0; i < n0; ++i) {
        SeriesFamily f;
        for (int j = 0; j < n0; ++j)
            f.action.push_back(vertex_series(p, VectorElem::unit(i), VectorElem::unit(j)));
        accepted.push_back({i, 0, std::move(f)});
    }

    // d_image[idx] = image of accepted element idx under the new derivation,
    // as a combination of accepted elements.
    std::map<int, VectorElem> d_image;
    ClosureTrace trace;
    for (int i = 0; i < n0; ++i) trace.accepted.push_back({p.basis.name(i), 0});

    for (int order = 1;; ++order) {
        bool accepted_any = false;
        std::size_t count_before = accepted.size();
        for (std::size_t parent = 0; parent < count_before; ++parent) {
            if (accepted[parent].order != order - 1) continue;
            SeriesFamily candidate;
            for (auto& s : accepted[parent].family.action)
                candidate.action.push_back(vseries_derive(s));
            std::vector<SeriesFamily> span;
            span.reserve(accepted.size());
            for (auto& e : accepted) span.push_back(e.family);
            auto combo = solve_membership(candidate, span);
            int orig = accepted[parent].orig;
            if (combo) {
                VectorElem image;
                for (std::size_t c = 0; c < combo->size(); ++c)
                    image.add_coord(static_cast<int>(c), (*combo)[c]);
                d_image[static_cast<int>(parent)] = image;
                trace.rejected[{p.basis.name(orig), order}] = image;
            } else {
                int new_idx = static_cast<int>(accepted.size());
                accepted.push_back({orig, order, std::move(candidate)});
                d_image[static_cast<int>(parent)] = VectorElem::unit(new_idx);
                trace.accepted.push_back({p.basis.name(orig), order});
                accepted_any = true;
            }
        }
        if (!accepted_any) break;
        if (order == max_order)
            throw MaxOrderExceeded("closure still accepting at order " +
                                   std::to_string(max_order));
    }

    Presentation out;
    out.name = p.name + "_dclosure";
    out.kind = Kind::dertex;
    for (auto& e : accepted) {
        if (e.order == 0) {
            out.basis.add(p.basis.name(e.orig));
        } else {
            std::string stem = p.basis.name(e.orig) + "_d" + std::to_string(e.order);
            while (out.basis.contains(stem)) stem += "_";
            out.basis.add(stem);
        }
    }

    LinearMap d(out.basis.dim());
    for (auto& [idx, img] : d_image) d.set_image(idx, img);
    out.derivation = d;

    // Mode table from the enlarged vertex operator map.
    for (std::size_t ia = 0; ia < accepted.size(); ++ia) {
        for (std::size_t ib = 0; ib < accepted.size(); ++ib) {
            VSeries base = vertex_series(p, VectorElem::unit(accepted[ia].orig),
                                         VectorElem::unit(accepted[ib].orig));
            // Original-basis coefficients coincide with the first n0 output
            // coordinates.
            for (int step = 0; step < accepted[ib].order; ++step) {
                VSeries mapped;
                for (auto& [e, vec] : base) {
                    VectorElem dv = apply_linear(d, vec);
                    if (!dv.is_zero()) mapped[e] = std::move(dv);
                }
                base = vseries_add(mapped, vseries_scale(vseries_derive(base), Rat(-1)));
            }
            for (int step = 0; step < accepted[ia].order; ++step) base = vseries_derive(base);
            for (auto& [e, vec] : base)
                out.modes.set(static_cast<int>(ia), static_cast<int>(ib), -e - 1, vec);
        }
    }

    EmbeddingWitness witness{p, out, LinearMap::identity(p.dim())};
    return {std::move(out), std::move(witness), std::move(trace)};
}

enum class Forget { vacuum_role, derivation, vacuum_element };

/// Downgrades a presentation: vertex -> d-ertex (drop the vacuum role,
/// deriving D from the mode table if absent), d-ertex -> ertex (drop the
/// derivation), or vertex -> ertex by removing the vacuum basis vector
/// entirely (only when the remaining mode table is closed).
inline Presentation forget(const Presentation& p, Forget what) {
    switch (what) {
        case Forget::vacuum_role: {
            if (p.kind != Kind::vertex || !p.vacuum)
                throw NotApplicable("no vacuum role to forget");
            Presentation out = p;
            if (!out.derivation) {
                LinearMap d(p.dim());
                VectorElem vac = VectorElem::unit(*p.vacuum);
                for (int i = 0; i < p.dim(); ++i)
                    d.set_image(i, mode_apply(p, VectorElem::unit(i), -2, vac));
                out.derivation = std::move(d);
            }
            out.kind = Kind::dertex;
            out.vacuum.reset();
            return out;
        }
        case Forget::derivation: {
            if (p.kind == Kind::dertex) {
                Presentation out = p;
                out.kind = Kind::ertex;
                out.derivation.reset();
                return out;
            }
            if (p.kind == Kind::vertex && p.derivation) {
                Presentation out = p;
                out.derivation.reset();
                return out;
            }
            throw NotApplicable("no derivation to forget");
        }
        case Forget::vacuum_element: {
            if (p.kind != Kind::vertex || !p.vacuum)
                throw NotApplicable("no vacuum element to remove");
            int vac = *p.vacuum;
            auto remap = [vac](int i) { return i < vac ? i : i - 1; };
            Presentation out;
            out.name = p.name;
            out.kind = Kind::ertex;
            for (int i = 0; i < p.dim(); ++i)
                if (i != vac) out.basis.add(p.basis.name(i));
            for (auto& [ij, pairmodes] : p.modes.all()) {
                auto [i, j] = ij;
                if (i == vac || j == vac) continue;
                for (auto& [n, val] : pairmodes) {
                    VectorElem mapped;
                    for (auto& [c, coeff] : val.coords()) {
                        if (c == vac)
                            throw NotClosed("mode (" + p.basis.name(i) + "," +
                                            p.basis.name(j) + "," + std::to_string(n) +
                                            ") leaves the span without the vacuum");
                        mapped.add_coord(remap(c), coeff);
                    }
                    out.modes.set(remap(i), remap(j), n, std::move(mapped));
                }
            }
            return out;
        }
    }
    throw NotApplicable("unknown forget target");
}

/// Unique vertex homomorphism through a vacuum adjunction: given a d-ertex
/// homomorphism psi from the adjunction's source into a vertex algebra v,
/// extends it by vacuum -> vacuum.
inline std::pair<LinearMap, Report> factor_through_vacuum(
    const Presentation& e2, const EmbeddingWitness& witness, const Presentation& v,
    const LinearMap& psi, const CheckOptions& opts = {}) {
    (void)opts;
    const Presentation& eprime = witness.source;
    if (v.kind != Kind::vertex || !v.vacuum)
        throw PreconditionFailed("factorization target must be a vertex presentation");
    if (!e2.vacuum)
        throw PreconditionFailed("adjunction output is missing its vacuum");
    Report gate = check_hom(psi, eprime, v, Kind::dertex);
    if (!gate.pass())
        throw PreconditionFailed("psi is not a d-ertex homomorphism", gate);

    LinearMap phi(e2.dim());
    for (int i = 0; i < eprime.dim(); ++i) {
        const VectorElem& inc = witness.inclusion.image(i);
        // Inclusions from adjoin_vacuum send basis to basis.
        for (auto& [target_idx, coeff] : inc.coords())
            phi.set_image(target_idx, psi.image(i) * coeff);
    }
    phi.set_image(*e2.vacuum, VectorElem::unit(*v.vacuum));

    Report report = check_hom(phi, e2, v, Kind::vertex);
    for (int i = 0; i < eprime.dim(); ++i) {
        VectorElem lhs = apply_linear(phi, witness.inclusion.image(i));
        VectorElem rhs = psi.image(i);
        if (!(lhs == rhs))
            report.add("factorization commutes", eprime.basis.name(i), "",
                       to_string(rhs, v.basis), to_string(lhs, v.basis));
    }
    return {std::move(phi), std::move(report)};
}

namespace detail {

/// Expresses v in the coordinates of the given spanning vectors, if possible.
inline std::optional<VectorElem> coords_in_span(const std::vector<VectorElem>& span,
                                                const VectorElem& v, int ambient_dim) {
    RatMat a(ambient_dim, static_cast<int>(span.size()));
    std::vector<Rat> b(ambient_dim, Rat(0));
    for (std::size_t c = 0; c < span.size(); ++c)
        for (auto& [r, coeff] : span[c].coords()) a.at(r, static_cast<int>(c)) = coeff;
    for (auto& [r, coeff] : v.coords()) b[r] = coeff;
    auto x = solve_linear(a, b);
    if (!x) return std::nullopt;
    VectorElem out;
    for (std::size_t c = 0; c < x->size(); ++c) out.add_coord(static_cast<int>(c), (*x)[c]);
    return out;
}

}  // namespace detail

/// Unique d-ertex homomorphism through a derivative closure: phi sends each
/// accepted formal derivative D^[n]e_l to D_V^n psi(e_l). Requires psi to be
/// a D-injective ertex homomorphism: the span of the D_V-orbit of psi's
/// image must carry an injective induced ertex structure.
inline std::pair<LinearMap, Report> factor_through_closure(
    const Presentation& e1, const ClosureTrace& trace, const EmbeddingWitness& witness,
    const Presentation& v, const LinearMap& psi, const CheckOptions& opts = {}) {
    const Presentation& source = witness.source;
    if (v.kind != Kind::dertex && v.kind != Kind::vertex)
        throw PreconditionFailed("factorization target must carry a derivation");
    if (!v.derivation)
        throw PreconditionFailed("factorization target must carry a derivation");
    Report gate = check_hom(psi, source, v, Kind::ertex);
    if (!gate.pass())
        throw PreconditionFailed("psi is not an ertex homomorphism", gate);

    // Materialize the derivation orbit of psi's image and its induced
    // sub-presentation, then certify injectivity.
    std::vector<VectorElem> orbit;
    for (int l = 0; l < source.dim(); ++l) {
        VectorElem cur = psi.image(l);
        int k = 0;
        while (!cur.is_zero()) {
            if (k > opts.nilpotence_bound)
                throw NilpotenceBoundExceeded("derivation orbit of psi(" +
                                              source.basis.name(l) + ")");
            orbit.push_back(cur);
            cur = apply_linear(*v.derivation, cur);
            ++k;
        }
    }
    std::vector<VectorElem> span;
    for (auto& w : orbit) {
        std::vector<VectorElem> trial = span;
        trial.push_back(w);
        RatMat m(v.dim(), static_cast<int>(trial.size()));
        for (std::size_t c = 0; c < trial.size(); ++c)
            for (auto& [r, coeff] : trial[c].coords()) m.at(r, static_cast<int>(c)) = coeff;
        if (rank(m) == static_cast<int>(trial.size())) span.push_back(w);
    }

    Presentation sub;
    sub.name = v.name + "_orbit";
    sub.kind = Kind::dertex;
    for (std::size_t i = 0; i < span.size(); ++i)
        sub.basis.add("w" + std::to_string(i));
    LinearMap sub_d(static_cast<int>(span.size()));
    for (std::size_t i = 0; i < span.size(); ++i) {
        VectorElem img = apply_linear(*v.derivation, span[i]);
        auto c = detail::coords_in_span(span, img, v.dim());
        if (!c)
            throw PreconditionFailed("derivation orbit span is not D-stable");
        sub_d.set_image(static_cast<int>(i), *c);
    }
    sub.derivation = std::move(sub_d);
    for (std::size_t i = 0; i < span.size(); ++i) {
        for (std::size_t j = 0; j < span.size(); ++j) {
            for (auto& [e, vec] : vertex_series(v, span[i], span[j])) {
                auto c = detail::coords_in_span(span, vec, v.dim());
                if (!c)
                    throw PreconditionFailed(
                        "derivation orbit span is not closed under the vertex operators");
                sub.modes.set(static_cast<int>(i), static_cast<int>(j), -e - 1, *c);
            }
        }
    }
    Report inj = check_injectivity(sub);
    if (!inj.pass())
        throw PreconditionFailed("psi is not D-injective: orbit span fails injectivity",
                                 inj);

    LinearMap phi(e1.dim());
    for (std::size_t idx = 0; idx < trace.accepted.size(); ++idx) {
        auto& [orig_name, order] = trace.accepted[idx];
        VectorElem img = psi.image(source.basis.index_of(orig_name));
        for (int k = 0; k < order; ++k) img = apply_linear(*v.derivation, img);
        phi.set_image(static_cast<int>(idx), img);
    }

    Report report = check_hom(phi, e1, v, Kind::dertex);
    for (int i = 0; i < source.dim(); ++i) {
        VectorElem lhs = apply_linear(phi, witness.inclusion.image(i));
        VectorElem rhs = psi.image(i);
        if (!(lhs == rhs))
            report.add("factorization commutes", source.basis.name(i), "",
                       to_string(rhs, v.basis), to_string(lhs, v.basis));
    }
    return {std::move(phi), std::move(report)};
}

/// Trace log: one line per derivative candidate, in sweep order.
inline std::string serialize_trace(const ClosureTrace& trace, const Presentation& out) {
    std::map<std::pair<std::string, int>, std::string> new_names;
    for (std::size_t i = 0; i < trace.accepted.size(); ++i)
        new_names[trace.accepted[i]] = out.basis.name(static_cast<int>(i));
    std::string log;
    for (int order = 1;; ++order) {
        bool any_parent = false;
        for (auto& [id, n] : trace.accepted) {
            if (n != order - 1) continue;
            any_parent = true;
            auto rejected = trace.rejected.find({id, order});
            if (rejected != trace.rejected.end()) {
                log += "reject " + id + " " + std::to_string(order) + " = " +
                       serialize_terms(rejected->second, out.basis) + "\n";
            } else if (new_names.count({id, order})) {
                log += "accept " + id + " " + std::to_string(order) + " as " +
                       new_names[{id, order}] + "\n";
            }
        }
        if (!any_parent) break;
    }
    return log;
}

}  // namespace ertex
