#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qfact/coeff.hpp"
#include "qfact/errors.hpp"

namespace qfact {

// Variables are numbered consecutively from 1; 0 is reserved so text formats
// can use it for field rows.
using VarId = std::uint32_t;

// Sorted set of distinct variable ids. The empty key is the constant term.
using TermKey = std::vector<VarId>;

inline TermKey make_key(std::initializer_list<VarId> ids) {
    TermKey k(ids);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

/// Multilinear polynomial over binary variables with exact coefficients.
/// x^2 = x is applied whenever terms are merged, so every key holds distinct
/// ids and no stored coefficient is zero.
class Poly {
  public:
    using TermMap = std::map<TermKey, Rat>;

    Poly() = default;

    static Poly constant(Rat c) {
        Poly p;
        p.add_term({}, std::move(c));
        return p;
    }
    static Poly variable(VarId v) {
        Poly p;
        p.add_term({v}, 1);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coeff(const TermKey& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Rat(0) : it->second;
    }
    Rat constant_term() const { return coeff({}); }

    void add_term(TermKey key, Rat c) {
        if (c == 0) return;
        std::sort(key.begin(), key.end());
        key.erase(std::unique(key.begin(), key.end()), key.end());
        auto [it, inserted] = terms_.try_emplace(std::move(key), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [k, c] : o.terms_) {
            auto [it, inserted] = terms_.emplace(k, c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += o * Rat(-1); }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Rat& s) {
        Poly r;
        if (s == 0) return r;
        for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, c * s);
        return r;
    }
    friend Poly operator*(const Rat& s, const Poly& a) { return a * s; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        TermKey merged;
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                merged.clear();
                std::set_union(ka.begin(), ka.end(), kb.begin(), kb.end(),
                               std::back_inserter(merged));
                auto [it, inserted] = r.terms_.emplace(merged, ca * cb);
                if (!inserted) it->second += ca * cb;
            }
        }
        r.prune();
        return r;
    }

    Poly squared() const { return *this * *this; }

    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    /// Value at a 0/1 assignment indexed by variable id. Entries < 0 mark
    /// missing variables; the vector must cover every id that appears.
    Rat evaluate(const std::vector<int>& bits) const {
        Rat total = 0;
        for (const auto& [key, c] : terms_) {
            bool zero = false;
            for (VarId v : key) {
                if (v >= bits.size() || bits[v] < 0)
                    throw MissingVariableError("assignment misses variable " + std::to_string(v));
                if (bits[v] == 0) {
                    zero = true;
                    break;
                }
            }
            if (!zero) total += c;
        }
        return total;
    }

    int degree() const {
        std::size_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.size());
        return static_cast<int>(d);
    }

    /// Largest |coefficient| over the non-constant terms.
    Rat max_abs_coeff() const {
        Rat best = 0;
        for (const auto& [k, c] : terms_) {
            if (k.empty()) continue;
            Rat a = c < 0 ? Rat(-c) : c;
            if (a > best) best = a;
        }
        return best;
    }

    std::size_t term_count() const { return terms_.size(); }

    std::vector<VarId> variables() const {
        std::vector<VarId> vars;
        for (const auto& [k, c] : terms_)
            for (VarId v : k) vars.push_back(v);
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
        return vars;
    }

    VarId max_var() const {
        VarId m = 0;
        for (const auto& [k, c] : terms_)
            if (!k.empty()) m = std::max(m, k.back());
        return m;
    }

    /// Drops zero coefficients. Construction already keeps the map normalized,
    /// so this is a fixed point.
    Poly normalized() const {
        Poly p = *this;
        p.prune();
        return p;
    }

    /// One term per line, `2*coeff/2 : id,id,...`, keys in canonical order.
    std::string canonical_text() const {
        std::ostringstream out;
        for (const auto& [key, c] : terms_) {
            out << half_numerator(c).str() << "/2 :";
            for (std::size_t i = 0; i < key.size(); ++i)
                out << (i == 0 ? " " : ",") << key[i];
            out << "\n";
        }
        return out.str();
    }

  private:
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second == 0)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    TermMap terms_;
};

}  // namespace qfact
