#pragma once

#include <map>
#include <string>
#include <vector>

#include "ertex/rational.hpp"
#include "ertex/report.hpp"

namespace ertex {

/// Ordered list of named basis elements. The order is part of the data: it
/// fixes probe order, serialization order, and greedy sweeps.
class Basis {
public:
    Basis() = default;
    explicit Basis(std::vector<std::string> names) {
        for (auto& n : names) add(n);
    }

    int add(const std::string& name) {
        if (index_.count(name)) throw DuplicateBasisId(name);
        index_[name] = static_cast<int>(names_.size());
        names_.push_back(name);
        return static_cast<int>(names_.size()) - 1;
    }

    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw UnknownIdentifier(name);
        return it->second;
    }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    const std::string& name(int i) const { return names_.at(i); }
    int dim() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::map<std::string, int> index_;
};

/// Finitely supported coordinate vector over a basis (index -> coefficient).
/// Zero coordinates are never stored.
class VectorElem {
public:
    VectorElem() = default;

    static VectorElem unit(int i) {
        VectorElem v;
        v.coords_[i] = Rat(1);
        return v;
    }

    const std::map<int, Rat>& coords() const { return coords_; }
    bool is_zero() const { return coords_.empty(); }

    Rat coord(int i) const {
        auto it = coords_.find(i);
        return it == coords_.end() ? Rat(0) : it->second;
    }

    void add_coord(int i, const Rat& c) {
        if (sgn(c) == 0) return;
        auto [it, inserted] = coords_.try_emplace(i, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) coords_.erase(it);
        }
    }

    VectorElem operator+(const VectorElem& o) const {
        VectorElem r = *this;
        for (auto& [i, c] : o.coords_) r.add_coord(i, c);
        return r;
    }

    VectorElem operator-() const {
        VectorElem r;
        for (auto& [i, c] : coords_) r.coords_.emplace(i, -c);
        return r;
    }

    VectorElem operator-(const VectorElem& o) const { return *this + (-o); }

    VectorElem operator*(const Rat& a) const {
        VectorElem r;
        if (sgn(a) == 0) return r;
        for (auto& [i, c] : coords_) r.coords_.emplace(i, c * a);
        return r;
    }

    bool operator==(const VectorElem& o) const { return coords_ == o.coords_; }

    int max_index() const { return coords_.empty() ? -1 : coords_.rbegin()->first; }

private:
    std::map<int, Rat> coords_;
};

inline bool is_zero(const VectorElem& v) { return v.is_zero(); }

inline std::string to_string(const VectorElem& v, const Basis& basis) {
    if (v.is_zero()) return "0";
    std::string s;
    for (auto& [i, c] : v.coords()) {
        if (!s.empty()) s += " + ";
        if (c == Rat(1)) {
            s += basis.name(i);
        } else {
            s += to_string(c) + "*" + basis.name(i);
        }
    }
    return s;
}

/// Linear map given by its images on the domain basis, extended by
/// linearity. Images live in whatever target space the caller intends.
class LinearMap {
public:
    LinearMap() = default;
    explicit LinearMap(int domain_dim) : images_(domain_dim) {}
    explicit LinearMap(std::vector<VectorElem> images) : images_(std::move(images)) {}

    static LinearMap identity(int dim) {
        LinearMap m(dim);
        for (int i = 0; i < dim; ++i) m.images_[i] = VectorElem::unit(i);
        return m;
    }

    int domain_dim() const { return static_cast<int>(images_.size()); }

    const VectorElem& image(int i) const {
        if (i < 0 || i >= domain_dim())
            throw UnknownBasisId("index " + std::to_string(i) + " outside map domain");
        return images_[i];
    }

    void set_image(int i, VectorElem v) { images_.at(i) = std::move(v); }

    bool operator==(const LinearMap& o) const { return images_ == o.images_; }

private:
    std::vector<VectorElem> images_;
};

inline VectorElem apply_linear(const LinearMap& m, const VectorElem& v) {
    VectorElem r;
    for (auto& [i, c] : v.coords()) {
        if (i >= m.domain_dim())
            throw UnknownBasisId("index " + std::to_string(i) + " outside map domain");
        const VectorElem& img = m.image(i);
        for (auto& [j, cj] : img.coords()) r.add_coord(j, cj * c);
    }
    return r;
}

inline LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
    LinearMap r(inner.domain_dim());
    for (int i = 0; i < inner.domain_dim(); ++i)
        r.set_image(i, apply_linear(outer, inner.image(i)));
    return r;
}

}  // namespace ertex
