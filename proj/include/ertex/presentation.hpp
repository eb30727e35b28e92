#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ertex/linear_solve.hpp"
#include "ertex/report.hpp"
#include "ertex/vector_space.hpp"

namespace ertex {

enum class Kind { ertex, dertex, vertex };

inline std::string to_string(Kind k) {
    switch (k) {
        case Kind::ertex: return "ertex";
        case Kind::dertex: return "d-ertex";
        case Kind::vertex: return "vertex";
    }
    return "?";
}

inline std::optional<Kind> kind_from_string(const std::string& s) {
    if (s == "ertex") return Kind::ertex;
    if (s == "d-ertex") return Kind::dertex;
    if (s == "vertex") return Kind::vertex;
    return std::nullopt;
}

/// Structure constants: entry (i,j,n) is (e_i)_n e_j, the coefficient of
/// x^(-n-1) in Y(e_i,x)e_j. Finitely many nonzero entries per pair.
class ModeTable {
public:
    using PairModes = std::map<int, VectorElem>;  // mode index n -> value

    const PairModes& pair(int i, int j) const {
        static const PairModes empty;
        auto it = entries_.find({i, j});
        return it == entries_.end() ? empty : it->second;
    }

    VectorElem entry(int i, int j, int n) const {
        const auto& p = pair(i, j);
        auto it = p.find(n);
        return it == p.end() ? VectorElem{} : it->second;
    }

    void set(int i, int j, int n, VectorElem v) {
        if (v.is_zero()) {
            auto it = entries_.find({i, j});
            if (it != entries_.end()) {
                it->second.erase(n);
                if (it->second.empty()) entries_.erase(it);
            }
            return;
        }
        entries_[{i, j}][n] = std::move(v);
    }

    const std::map<std::pair<int, int>, PairModes>& all() const { return entries_; }

    std::size_t nonzero_count() const {
        std::size_t n = 0;
        for (auto& [ij, p] : entries_) n += p.size();
        return n;
    }

    bool operator==(const ModeTable&) const = default;

private:
    std::map<std::pair<int, int>, PairModes> entries_;
};

/// Finite presentation of an ertex, d-ertex, or vertex algebra: named
/// basis, mode table, optional derivation (required for d-ertex), optional
/// vacuum (required for vertex). Immutable once validated.
struct Presentation {
    std::string name;
    Kind kind = Kind::ertex;
    Basis basis;
    ModeTable modes;
    std::optional<LinearMap> derivation;
    std::optional<int> vacuum;
    /// Optional declared bounds [n_lo, n_hi] on mode indices per (i,j) pair,
    /// checked by the truncation checker when present.
    std::optional<std::map<std::pair<int, int>, std::pair<int, int>>> declared_support;

    int dim() const { return basis.dim(); }

    VectorElem unit(const std::string& id) const {
        return VectorElem::unit(basis.index_of(id));
    }
};

/// Default cap on the per-vector nilpotence degree of derivations.
inline constexpr int kDefaultNilpotenceBound = 16;

/// Smallest d with D^d v = 0, or throws past the bound.
inline int nilpotence_degree(const LinearMap& d, const VectorElem& v, int bound,
                             const std::string& what) {
    VectorElem cur = v;
    int k = 0;
    while (!cur.is_zero()) {
        if (k >= bound) throw NilpotenceBoundExceeded(what);
        cur = apply_linear(d, cur);
        ++k;
    }
    return k;
}

/// Y(u,x)v as a finitely supported series keyed by the exponent of x,
/// extended bilinearly from the mode table.
inline VSeries vertex_series(const Presentation& p, const VectorElem& u,
                             const VectorElem& v) {
    VSeries r;
    for (auto& [i, ci] : u.coords()) {
        if (i >= p.dim()) throw UnknownBasisId("index " + std::to_string(i));
        for (auto& [j, cj] : v.coords()) {
            if (j >= p.dim()) throw UnknownBasisId("index " + std::to_string(j));
            for (auto& [n, val] : p.modes.pair(i, j)) {
                int exp = -n - 1;
                VectorElem add = val * (ci * cj);
                auto it = r.find(exp);
                if (it == r.end()) {
                    if (!add.is_zero()) r.emplace(exp, std::move(add));
                } else {
                    it->second = it->second + add;
                    if (it->second.is_zero()) r.erase(it);
                }
            }
        }
    }
    return r;
}

/// Coefficient of x^(-n-1) in Y(u,x)v.
inline VectorElem mode_apply(const Presentation& p, const VectorElem& u, int n,
                             const VectorElem& v) {
    VSeries s = vertex_series(p, u, v);
    auto it = s.find(-n - 1);
    return it == s.end() ? VectorElem{} : it->second;
}

/// e^{shift D} v = sum_k shift^k / k! D^k v, a finite polynomial in the
/// shift variable keyed by power. Requires a derivation, nilpotent on v.
inline std::map<int, VectorElem> exp_D(const Presentation& p, const VectorElem& v,
                                       int bound = kDefaultNilpotenceBound) {
    if (!p.derivation)
        throw NotApplicable("presentation " + p.name + " has no derivation");
    std::map<int, VectorElem> r;
    VectorElem cur = v;
    Rat fact(1);
    int k = 0;
    while (!cur.is_zero()) {
        if (k > bound)
            throw NilpotenceBoundExceeded("e^{xD} on a vector in " + p.name);
        r[k] = cur * (Rat(1) / fact);
        cur = apply_linear(*p.derivation, cur);
        ++k;
        fact *= Rat(k);
    }
    return r;
}

inline std::string to_string(const VSeries& s, const Basis& basis,
                             const std::string& varname = "x") {
    if (s.empty()) return "0";
    std::string out;
    for (auto& [e, v] : s) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(v, basis) + ")";
        if (e != 0) out += "*" + varname + "^" + std::to_string(e);
    }
    return out;
}

/// Structural invariants: kind-specific required fields, derivation
/// nilpotence within the bound, and vertex derivations matching the
/// standard derivative operator v -> v_{-2} vacuum.
inline Report validate(const Presentation& p, int nilpotence_bound = kDefaultNilpotenceBound) {
    Report report;
    if (p.kind == Kind::dertex && !p.derivation)
        report.add("structure", p.name, "", "derivation required for d-ertex", "missing");
    if (p.kind == Kind::vertex && !p.vacuum)
        report.add("structure", p.name, "", "vacuum required for vertex", "missing");
    if (p.vacuum && (*p.vacuum < 0 || *p.vacuum >= p.dim()))
        report.add("structure", p.name, "", "vacuum inside basis", "out of range");
    if (p.derivation) {
        if (p.derivation->domain_dim() != p.dim()) {
            report.add("structure", p.name, "", "derivation total on basis",
                       "domain dimension " + std::to_string(p.derivation->domain_dim()));
        } else {
            for (int i = 0; i < p.dim(); ++i) {
                try {
                    nilpotence_degree(*p.derivation, VectorElem::unit(i), nilpotence_bound,
                                      p.basis.name(i));
                } catch (const NilpotenceBoundExceeded&) {
                    report.add("derivation nilpotence", p.basis.name(i), "",
                               "D^k = 0 within bound " + std::to_string(nilpotence_bound),
                               "still nonzero");
                }
            }
        }
    }
    for (auto& [ij, pairmodes] : p.modes.all()) {
        auto [i, j] = ij;
        if (i < 0 || i >= p.dim() || j < 0 || j >= p.dim())
            report.add("structure", p.name, "", "mode indices inside basis",
                       "(" + std::to_string(i) + "," + std::to_string(j) + ")");
        for (auto& [n, val] : pairmodes)
            if (val.max_index() >= p.dim())
                report.add("structure", p.name, "", "mode values inside basis",
                           "entry (" + std::to_string(i) + "," + std::to_string(j) + "," +
                               std::to_string(n) + ")");
    }
    if (p.kind == Kind::vertex && p.vacuum && p.derivation &&
        p.derivation->domain_dim() == p.dim()) {
        VectorElem vac = VectorElem::unit(*p.vacuum);
        for (int i = 0; i < p.dim(); ++i) {
            VectorElem lhs = p.derivation->image(i);
            VectorElem rhs = mode_apply(p, VectorElem::unit(i), -2, vac);
            if (!(lhs == rhs))
                report.add("derivation mismatch", p.basis.name(i), "",
                           to_string(rhs, p.basis) + " (= v_{-2} vacuum)",
                           to_string(lhs, p.basis));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Definition-file format (line oriented, '#' comments):
//
//   algebra NAME
//   kind ertex|d-ertex|vertex
//   basis ID (ID)*
//   mode I J N = TERM (+ TERM)*      # asserts (e_I)_N e_J = sum of terms
//   D I = 0 | TERM (+ TERM)*
//   vacuum ID
//
// TERM := [RATIONAL '*'] ID, RATIONAL := ['-'] DIGITS ['/' DIGITS].
// ---------------------------------------------------------------------------

namespace detail {

struct LineTokens {
    std::vector<std::string> tokens;
    std::vector<int> columns;  // 1-based start column per token
};

inline LineTokens tokenize_line(const std::string& line) {
    LineTokens out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') { ++i; continue; }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != '#')
            ++i;
        out.tokens.push_back(line.substr(start, i - start));
        out.columns.push_back(static_cast<int>(start) + 1);
    }
    return out;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

/// Parses "TERM (+ TERM)*" or "0" into a vector over the given basis.
inline VectorElem parse_terms(const LineTokens& lt, std::size_t first, const Basis& basis,
                              int lineno) {
    VectorElem out;
    if (first >= lt.tokens.size())
        throw ParseError(lineno, lt.columns.empty() ? 1 : lt.columns.back(),
                         "expected terms after '='");
    if (lt.tokens.size() == first + 1 && lt.tokens[first] == "0") return out;
    bool expect_term = true;
    for (std::size_t i = first; i < lt.tokens.size(); ++i) {
        const std::string& tok = lt.tokens[i];
        if (!expect_term) {
            if (tok != "+") throw ParseError(lineno, lt.columns[i], "expected '+'");
            expect_term = true;
            continue;
        }
        Rat coeff(1);
        std::string id = tok;
        auto star = tok.find('*');
        if (star != std::string::npos) {
            coeff = parse_rational(tok.substr(0, star));
            id = tok.substr(star + 1);
        }
        if (!is_identifier(id))
            throw ParseError(lineno, lt.columns[i], "malformed term: " + tok);
        out.add_coord(basis.index_of(id), coeff);
        expect_term = false;
    }
    if (expect_term)
        throw ParseError(lineno, lt.columns.back(), "dangling '+'");
    return out;
}

inline int parse_int(const std::string& tok, int lineno, int col) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, col, "expected integer, got '" + tok + "'");
    }
}

}  // namespace detail

inline Presentation parse_presentation(const std::string& source) {
    Presentation p;
    bool have_name = false, have_kind = false, have_basis = false;
    std::map<int, bool> d_lines;
    std::map<std::tuple<int, int, int>, bool> mode_lines;
    std::vector<VectorElem> d_images;

    std::istringstream in(source);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto lt = detail::tokenize_line(line);
        if (lt.tokens.empty()) continue;
        const std::string& head = lt.tokens[0];
        if (head == "algebra") {
            if (lt.tokens.size() != 2)
                throw ParseError(lineno, 1, "usage: algebra NAME");
            if (have_name) throw ParseError(lineno, 1, "duplicate algebra line");
            p.name = lt.tokens[1];
            have_name = true;
        } else if (head == "kind") {
            if (lt.tokens.size() != 2)
                throw ParseError(lineno, 1, "usage: kind ertex|d-ertex|vertex");
            auto k = kind_from_string(lt.tokens[1]);
            if (!k) throw ParseError(lineno, lt.columns[1], "unknown kind " + lt.tokens[1]);
            if (have_kind) throw ParseError(lineno, 1, "duplicate kind line");
            p.kind = *k;
            have_kind = true;
        } else if (head == "basis") {
            if (lt.tokens.size() < 2)
                throw ParseError(lineno, 1, "basis line needs at least one identifier");
            if (have_basis) throw ParseError(lineno, 1, "duplicate basis line");
            for (std::size_t i = 1; i < lt.tokens.size(); ++i) {
                if (!detail::is_identifier(lt.tokens[i]))
                    throw ParseError(lineno, lt.columns[i],
                                     "malformed identifier: " + lt.tokens[i]);
                p.basis.add(lt.tokens[i]);  // throws DuplicateBasisId
            }
            have_basis = true;
            d_images.assign(p.basis.dim(), VectorElem{});
        } else if (head == "mode") {
            if (!have_basis)
                throw ParseError(lineno, 1, "basis must be declared before mode lines");
            if (lt.tokens.size() < 6 || lt.tokens[4] != "=")
                throw ParseError(lineno, 1, "usage: mode I J N = TERM (+ TERM)*");
            int i = p.basis.index_of(lt.tokens[1]);
            int j = p.basis.index_of(lt.tokens[2]);
            int n = detail::parse_int(lt.tokens[3], lineno, lt.columns[3]);
            if (mode_lines.count({i, j, n}))
                throw ParseError(lineno, 1, "duplicate mode entry (" + lt.tokens[1] + "," +
                                                lt.tokens[2] + "," + lt.tokens[3] + ")");
            mode_lines[{i, j, n}] = true;
            p.modes.set(i, j, n, detail::parse_terms(lt, 5, p.basis, lineno));
        } else if (head == "D") {
            if (!have_basis)
                throw ParseError(lineno, 1, "basis must be declared before D lines");
            if (lt.tokens.size() < 4 || lt.tokens[2] != "=")
                throw ParseError(lineno, 1, "usage: D I = 0 | TERM (+ TERM)*");
            int i = p.basis.index_of(lt.tokens[1]);
            if (d_lines.count(i))
                throw ParseError(lineno, 1, "duplicate D line for " + lt.tokens[1]);
            d_lines[i] = true;
            d_images[i] = detail::parse_terms(lt, 3, p.basis, lineno);
        } else if (head == "vacuum") {
            if (!have_basis)
                throw ParseError(lineno, 1, "basis must be declared before vacuum line");
            if (lt.tokens.size() != 2) throw ParseError(lineno, 1, "usage: vacuum ID");
            if (p.vacuum) throw ParseError(lineno, 1, "duplicate vacuum line");
            p.vacuum = p.basis.index_of(lt.tokens[1]);
        } else {
            throw ParseError(lineno, lt.columns[0], "unknown directive: " + head);
        }
    }
    if (!have_name) throw ParseError(lineno + 1, 1, "missing algebra line");
    if (!have_kind) throw ParseError(lineno + 1, 1, "missing kind line");
    if (!have_basis) throw ParseError(lineno + 1, 1, "missing basis line");
    if (!d_lines.empty()) p.derivation = LinearMap(std::move(d_images));
    return p;
}

inline std::string serialize_terms(const VectorElem& v, const Basis& basis) {
    if (v.is_zero()) return "0";
    std::string s;
    for (auto& [i, c] : v.coords()) {
        if (!s.empty()) s += " + ";
        if (c == Rat(1)) s += basis.name(i);
        else s += to_string(c) + "*" + basis.name(i);
    }
    return s;
}

/// Deterministic canonical text form: basis in order, modes sorted by
/// (i, j, n), D lines per basis element, vacuum last.
inline std::string serialize(const Presentation& p) {
    std::string out;
    out += "algebra " + p.name + "\n";
    out += "kind " + to_string(p.kind) + "\n";
    out += "basis";
    for (auto& n : p.basis.names()) out += " " + n;
    out += "\n";
    for (auto& [ij, pairmodes] : p.modes.all()) {
        auto [i, j] = ij;
        for (auto& [n, val] : pairmodes) {
            out += "mode " + p.basis.name(i) + " " + p.basis.name(j) + " " +
                   std::to_string(n) + " = " + serialize_terms(val, p.basis) + "\n";
        }
    }
    if (p.derivation) {
        for (int i = 0; i < p.dim(); ++i)
            out += "D " + p.basis.name(i) + " = " +
                   serialize_terms(p.derivation->image(i), p.basis) + "\n";
    }
    if (p.vacuum) out += "vacuum " + p.basis.name(*p.vacuum) + "\n";
    return out;
}

/// Map files: one line per source basis element, `ID -> 0 | TERM (+ TERM)*`,
/// with terms over the target basis.
inline LinearMap parse_map_file(const std::string& source, const Basis& from,
                                const Basis& to) {
    LinearMap m(from.dim());
    std::vector<bool> seen(from.dim(), false);
    std::istringstream in(source);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto lt = detail::tokenize_line(line);
        if (lt.tokens.empty()) continue;
        if (lt.tokens.size() < 3 || lt.tokens[1] != "->")
            throw ParseError(lineno, 1, "usage: ID -> 0 | TERM (+ TERM)*");
        int i = from.index_of(lt.tokens[0]);
        if (seen[i]) throw ParseError(lineno, 1, "duplicate image for " + lt.tokens[0]);
        seen[i] = true;
        m.set_image(i, detail::parse_terms(lt, 2, to, lineno));
    }
    for (int i = 0; i < from.dim(); ++i)
        if (!seen[i]) throw ParseError(lineno + 1, 1, "missing image for " + from.name(i));
    return m;
}

inline std::string serialize_map(const LinearMap& m, const Basis& from, const Basis& to) {
    std::string out;
    for (int i = 0; i < from.dim(); ++i)
        out += from.name(i) + " -> " + serialize_terms(m.image(i), to) + "\n";
    return out;
}

}  // namespace ertex
