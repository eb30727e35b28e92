#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "ertex/vector_space.hpp"

namespace ertex {

/// Dense rational matrix, row-major. Sized for desk-scale systems.
class RatMat {
public:
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& at(int r, int c) { return data_[r * cols_ + c]; }
    const Rat& at(int r, int c) const { return data_[r * cols_ + c]; }
    void swap_rows(int a, int b) {
        for (int c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
    }

private:
    int rows_, cols_;
    std::vector<Rat> data_;
};

/// Fraction-free (Bareiss) forward elimination. Returns the pivot column of
/// each eliminated row, in elimination order. The matrix is modified in
/// place into an echelon form whose pivot entries are exact.
inline std::vector<int> bareiss_eliminate(RatMat& m) {
    std::vector<int> pivot_cols;
    Rat prev_pivot(1);
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot_row = -1;
        for (int r = row; r < m.rows(); ++r) {
            if (sgn(m.at(r, col)) != 0) { pivot_row = r; break; }
        }
        if (pivot_row < 0) continue;
        if (pivot_row != row) m.swap_rows(pivot_row, row);
        const Rat pivot = m.at(row, col);
        for (int r = row + 1; r < m.rows(); ++r) {
            for (int c = col + 1; c < m.cols(); ++c)
                m.at(r, c) = (m.at(r, c) * pivot - m.at(r, col) * m.at(row, c)) / prev_pivot;
            m.at(r, col) = Rat(0);
        }
        prev_pivot = pivot;
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

inline int rank(RatMat m) { return static_cast<int>(bareiss_eliminate(m).size()); }

/// Solves A x = b exactly. Returns nullopt when inconsistent; free variables
/// (if any) are set to zero.
inline std::optional<std::vector<Rat>> solve_linear(const RatMat& a,
                                                    const std::vector<Rat>& b) {
    RatMat aug(a.rows(), a.cols() + 1);
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    std::vector<int> pivots = bareiss_eliminate(aug);
    int nrows = static_cast<int>(pivots.size());
    // A pivot in the augmented column means the system is inconsistent.
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Rat> x(a.cols(), Rat(0));
    for (int r = nrows - 1; r >= 0; --r) {
        Rat sum = aug.at(r, a.cols());
        for (int c = pivots[r] + 1; c < a.cols(); ++c) sum -= aug.at(r, c) * x[c];
        x[pivots[r]] = sum / aug.at(r, pivots[r]);
    }
    return x;
}

/// A nonzero kernel vector of A, or nullopt when the kernel is trivial.
inline std::optional<std::vector<Rat>> kernel_vector(const RatMat& a) {
    RatMat m = a;
    std::vector<int> pivots = bareiss_eliminate(m);
    if (static_cast<int>(pivots.size()) == a.cols()) return std::nullopt;
    // Pick the first free column and back-substitute with that variable = 1.
    std::vector<bool> is_pivot(a.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    int free_col = 0;
    while (free_col < a.cols() && is_pivot[free_col]) ++free_col;
    std::vector<Rat> x(a.cols(), Rat(0));
    x[free_col] = Rat(1);
    for (int r = static_cast<int>(pivots.size()) - 1; r >= 0; --r) {
        if (pivots[r] > free_col) continue;
        Rat sum(0);
        for (int c = pivots[r] + 1; c < a.cols(); ++c) sum -= m.at(r, c) * x[c];
        x[pivots[r]] = sum / m.at(r, pivots[r]);
    }
    return x;
}

/// Laurent series in one distinguished variable with vector coefficients,
/// keyed by exponent.
using VSeries = std::map<int, VectorElem>;

inline VSeries vseries_add(const VSeries& a, const VSeries& b) {
    VSeries r = a;
    for (auto& [e, v] : b) {
        VectorElem sum = (r.count(e) ? r[e] : VectorElem{}) + v;
        if (sum.is_zero()) r.erase(e);
        else r[e] = std::move(sum);
    }
    return r;
}

inline VSeries vseries_scale(const VSeries& a, const Rat& c) {
    VSeries r;
    if (sgn(c) == 0) return r;
    for (auto& [e, v] : a) r.emplace(e, v * c);
    return r;
}

inline VSeries vseries_derive(const VSeries& a) {
    VSeries r;
    for (auto& [e, v] : a) {
        if (e == 0) continue;
        VectorElem scaled = v * Rat(e);
        if (!scaled.is_zero()) r[e - 1] = r.count(e - 1) ? r[e - 1] + scaled : scaled;
    }
    // re-normalize against accidental cancellation
    for (auto it = r.begin(); it != r.end();)
        it = it->second.is_zero() ? r.erase(it) : std::next(it);
    return r;
}

/// The series a candidate operator produces on each probe basis vector.
/// Families over the same probe list are compared coefficient by
/// coefficient, which flattens to exact rational linear algebra.
struct SeriesFamily {
    std::vector<VSeries> action;  // indexed by probe basis position

    bool operator==(const SeriesFamily&) const = default;
};

inline SeriesFamily family_scale(const SeriesFamily& f, const Rat& c) {
    SeriesFamily r;
    r.action.reserve(f.action.size());
    for (auto& s : f.action) r.action.push_back(vseries_scale(s, c));
    return r;
}

inline SeriesFamily family_add(const SeriesFamily& a, const SeriesFamily& b) {
    SeriesFamily r;
    for (std::size_t i = 0; i < a.action.size(); ++i)
        r.action.push_back(vseries_add(a.action[i], b.action[i]));
    return r;
}

namespace detail {

/// Coordinate keys (probe, exponent, basis coordinate) present in any of
/// the given families, in deterministic order.
inline std::vector<std::tuple<int, int, int>> family_keys(
    const std::vector<const SeriesFamily*>& families) {
    std::map<std::tuple<int, int, int>, bool> keys;
    for (const SeriesFamily* f : families) {
        for (std::size_t probe = 0; probe < f->action.size(); ++probe)
            for (auto& [exp, vec] : f->action[probe])
                for (auto& [coord, c] : vec.coords())
                    keys[{static_cast<int>(probe), exp, coord}] = true;
    }
    std::vector<std::tuple<int, int, int>> out;
    out.reserve(keys.size());
    for (auto& [k, unused] : keys) out.push_back(k);
    return out;
}

inline Rat family_entry(const SeriesFamily& f, const std::tuple<int, int, int>& key) {
    auto [probe, exp, coord] = key;
    if (probe >= static_cast<int>(f.action.size())) return Rat(0);
    auto it = f.action[probe].find(exp);
    if (it == f.action[probe].end()) return Rat(0);
    return it->second.coord(coord);
}

}  // namespace detail

/// Coefficients c_k with target = sum c_k * span_k as series families
/// (every coefficient of every probe series matches), or nullopt. When the
/// span is linearly independent the combination is unique.
inline std::optional<std::vector<Rat>> solve_membership(
    const SeriesFamily& target, const std::vector<SeriesFamily>& span) {
    std::vector<const SeriesFamily*> all;
    all.push_back(&target);
    for (auto& f : span) all.push_back(&f);
    auto keys = detail::family_keys(all);
    RatMat a(static_cast<int>(keys.size()), static_cast<int>(span.size()));
    std::vector<Rat> b(keys.size(), Rat(0));
    for (std::size_t r = 0; r < keys.size(); ++r) {
        b[r] = detail::family_entry(target, keys[r]);
        for (std::size_t c = 0; c < span.size(); ++c)
            a.at(static_cast<int>(r), static_cast<int>(c)) =
                detail::family_entry(span[c], keys[r]);
    }
    return solve_linear(a, b);
}

/// Pass iff no nonzero rational combination of the members is the zero
/// family. On failure the witness combination is reported.
inline Report check_injective_family(const std::vector<SeriesFamily>& members) {
    Report report;
    if (members.empty()) return report;
    std::vector<const SeriesFamily*> all;
    for (auto& f : members) all.push_back(&f);
    auto keys = detail::family_keys(all);
    RatMat a(static_cast<int>(keys.size()), static_cast<int>(members.size()));
    for (std::size_t r = 0; r < keys.size(); ++r)
        for (std::size_t c = 0; c < members.size(); ++c)
            a.at(static_cast<int>(r), static_cast<int>(c)) =
                detail::family_entry(members[c], keys[r]);
    auto kernel = kernel_vector(a);
    if (kernel) {
        std::string combo;
        for (std::size_t c = 0; c < kernel->size(); ++c) {
            if (!combo.empty()) combo += ", ";
            combo += to_string((*kernel)[c]);
        }
        report.add("family independence", "", "", "only the trivial combination vanishes",
                   "(" + combo + ") gives the zero family");
    }
    return report;
}

}  // namespace ertex
