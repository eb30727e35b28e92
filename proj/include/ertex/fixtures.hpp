#pragma once

#include <string>

#include "ertex/constructions.hpp"
#include "ertex/presentation.hpp"

namespace ertex {
namespace fixtures {

namespace detail {

/// Product in the truncated polynomial algebra C[t]/(t^k), with basis index
/// = degree.
inline VectorElem trunc_mul(const VectorElem& a, const VectorElem& b, int k) {
    VectorElem r;
    for (auto& [i, ci] : a.coords())
        for (auto& [j, cj] : b.coords())
            if (i + j < k) r.add_coord(i + j, ci * cj);
    return r;
}

}  // namespace detail

/// Truncated polynomial vertex algebra on basis {1, t, ..., t^(k-1)} with
/// t^k = 0, derivation d/dt, vacuum 1, and Y(u,x)v = (e^{xD}u) v.
inline Presentation commutative_va(int k) {
    if (k < 2 || k > 12)
        throw NotApplicable("commutative fixture needs 2 <= k <= 12");
    Presentation p;
    p.name = "cva" + std::to_string(k);
    p.kind = Kind::vertex;
    p.basis.add("one");
    for (int d = 1; d < k; ++d)
        p.basis.add(d == 1 ? "t" : "t" + std::to_string(d));
    p.vacuum = 0;

    LinearMap ddt(k);
    for (int d = 1; d < k; ++d) ddt.set_image(d, VectorElem::unit(d - 1) * Rat(d));
    p.derivation = ddt;

    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            // e^{xD} t^a = sum_r x^r D^r t^a / r!, then multiply by t^b.
            VectorElem cur = VectorElem::unit(a);
            Rat fact(1);
            int r = 0;
            while (!cur.is_zero()) {
                VectorElem coeff = detail::trunc_mul(cur * (Rat(1) / fact),
                                                     VectorElem::unit(b), k);
                p.modes.set(a, b, -r - 1, coeff);
                cur = apply_linear(*p.derivation, cur);
                ++r;
                fact *= Rat(r);
            }
        }
    }
    return p;
}

/// The same algebra with the vacuum vector removed: span {t, ..., t^(k-1)},
/// an injective ertex algebra that is not closed under d/dt. The generator
/// verifies injectivity and refuses otherwise.
inline Presentation strip_to_ertex(int k) {
    Presentation p = forget(commutative_va(k), Forget::vacuum_element);
    p.name = "strip" + std::to_string(k);
    Report inj = check_injectivity(p);
    if (!inj.pass())
        throw PreconditionFailed("stripped fixture is not injective", inj);
    return p;
}

}  // namespace fixtures
}  // namespace ertex
