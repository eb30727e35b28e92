#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ertex {

/// Interned formal-variable identifier. The stock variables x, y, z, t,
/// x0, x1, x2 get fixed ids; further names are interned on first use.
struct VarId {
    std::uint32_t id = 0;
    auto operator<=>(const VarId&) const = default;
};

namespace detail {

struct VarRegistry {
    std::vector<std::string> names;
    std::map<std::string, std::uint32_t, std::less<>> index;
    std::mutex mutex;

    VarRegistry() {
        for (const char* n : {"x", "y", "z", "t", "x0", "x1", "x2"}) {
            index.emplace(n, static_cast<std::uint32_t>(names.size()));
            names.emplace_back(n);
        }
    }
};

inline VarRegistry& var_registry() {
    static VarRegistry reg;
    return reg;
}

}  // namespace detail

inline VarId var(std::string_view name) {
    auto& reg = detail::var_registry();
    std::lock_guard<std::mutex> lock(reg.mutex);
    auto it = reg.index.find(name);
    if (it != reg.index.end()) return VarId{it->second};
    auto id = static_cast<std::uint32_t>(reg.names.size());
    reg.names.emplace_back(name);
    reg.index.emplace(std::string(name), id);
    return VarId{id};
}

inline const std::string& var_name(VarId v) {
    auto& reg = detail::var_registry();
    std::lock_guard<std::mutex> lock(reg.mutex);
    return reg.names.at(v.id);
}

/// Finitely supported exponent vector. Entries with exponent zero are not
/// stored, so the default value is the monomial 1.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<std::pair<VarId, int>> entries) {
        for (auto& [v, e] : entries) bump(v, e);
    }

    int get(VarId v) const {
        auto it = find(v);
        return it == exps_.end() ? 0 : it->second;
    }

    /// Adds delta to the exponent of v, dropping the entry if it cancels.
    void bump(VarId v, int delta) {
        if (delta == 0) return;
        auto it = std::lower_bound(exps_.begin(), exps_.end(), v,
                                   [](const auto& p, VarId w) { return p.first < w; });
        if (it != exps_.end() && it->first == v) {
            it->second += delta;
            if (it->second == 0) exps_.erase(it);
        } else {
            exps_.insert(it, {v, delta});
        }
    }

    MultiIndex plus(const MultiIndex& other) const {
        MultiIndex r = *this;
        for (auto& [v, e] : other.exps_) r.bump(v, e);
        return r;
    }

    MultiIndex plus_var(VarId v, int delta) const {
        MultiIndex r = *this;
        r.bump(v, delta);
        return r;
    }

    /// Exponent vector with v removed (used by residue extraction).
    MultiIndex without(VarId v) const {
        MultiIndex r = *this;
        r.bump(v, -r.get(v));
        return r;
    }

    long total_degree() const {
        long d = 0;
        for (auto& [v, e] : exps_) d += e;
        return d;
    }

    const std::vector<std::pair<VarId, int>>& entries() const { return exps_; }
    bool empty() const { return exps_.empty(); }

    auto operator<=>(const MultiIndex&) const = default;

private:
    std::vector<std::pair<VarId, int>>::const_iterator find(VarId v) const {
        auto it = std::lower_bound(exps_.begin(), exps_.end(), v,
                                   [](const auto& p, VarId w) { return p.first < w; });
        if (it != exps_.end() && it->first == v) return it;
        return exps_.end();
    }

    std::vector<std::pair<VarId, int>> exps_;  // sorted by VarId, no zeros
};

inline std::string to_string(const MultiIndex& m) {
    if (m.empty()) return "1";
    std::string s;
    for (auto& [v, e] : m.entries()) {
        if (!s.empty()) s += "*";
        s += var_name(v);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

/// Inclusive per-variable exponent bounds used to truncate expansions and
/// to bound coefficient comparisons. Variables without an explicit entry
/// fall back to the default range.
class DegreeWindow {
public:
    DegreeWindow() = default;
    DegreeWindow(int lo, int hi) : default_lo_(lo), default_hi_(hi) {}

    static DegreeWindow symmetric(int n) { return DegreeWindow(-n, n); }

    DegreeWindow& set(VarId v, int lo, int hi) {
        bounds_[v] = {lo, hi};
        return *this;
    }

    std::pair<int, int> bound(VarId v) const {
        auto it = bounds_.find(v);
        if (it != bounds_.end()) return it->second;
        return {default_lo_, default_hi_};
    }

    int lo(VarId v) const { return bound(v).first; }
    int hi(VarId v) const { return bound(v).second; }

    bool contains(const MultiIndex& m) const {
        for (auto& [v, e] : m.entries()) {
            auto [l, h] = bound(v);
            if (e < l || e > h) return false;
        }
        return true;
    }

private:
    int default_lo_ = -8;
    int default_hi_ = 8;
    std::map<VarId, std::pair<int, int>> bounds_;
};

}  // namespace ertex
