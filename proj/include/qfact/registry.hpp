#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfact/errors.hpp"
#include "qfact/polynomial.hpp"

namespace qfact {

enum class VarKind : std::uint8_t {
    factor_p,  // unknown bit of p, index = power of two
    factor_q,  // unknown bit of q
    carry,     // carry register bit, index = 1-based position
    ancilla,   // product substitute, pair records what it replaces
};

inline const char* var_kind_name(VarKind k) {
    switch (k) {
        case VarKind::factor_p: return "p";
        case VarKind::factor_q: return "q";
        case VarKind::carry: return "c";
        case VarKind::ancilla: return "t";
    }
    return "?";
}

struct VarEntry {
    VarId id = 0;
    VarKind kind = VarKind::factor_p;
    // factor_p/factor_q: bit weight exponent. carry: 1-based carry number.
    // ancilla: 1-based ancilla number.
    std::uint32_t index = 0;
    // ancilla only: the ids whose product the ancilla replaces.
    VarId pair_a = 0, pair_b = 0;
    std::string name;
};

/// Maps variable ids (consecutive from 1) to their role in the encoding.
class VariableRegistry {
  public:
    VarId add(VarKind kind, std::uint32_t index, std::string name) {
        VarEntry e;
        e.id = static_cast<VarId>(entries_.size() + 1);
        e.kind = kind;
        e.index = index;
        e.name = std::move(name);
        entries_.push_back(e);
        return e.id;
    }

    VarId add_ancilla(VarId a, VarId b, std::uint32_t index, std::string name) {
        VarEntry e;
        e.id = static_cast<VarId>(entries_.size() + 1);
        e.kind = VarKind::ancilla;
        e.index = index;
        e.pair_a = std::min(a, b);
        e.pair_b = std::max(a, b);
        e.name = std::move(name);
        entries_.push_back(e);
        return e.id;
    }

    const VarEntry& entry(VarId id) const {
        if (id == 0 || id > entries_.size())
            throw MissingVariableError("no registry entry for variable " + std::to_string(id));
        return entries_[id - 1];
    }

    std::size_t size() const { return entries_.size(); }
    const std::vector<VarEntry>& entries() const { return entries_; }

    std::optional<VarId> find_ancilla(VarId a, VarId b) const {
        VarId lo = std::min(a, b), hi = std::max(a, b);
        for (const auto& e : entries_)
            if (e.kind == VarKind::ancilla && e.pair_a == lo && e.pair_b == hi) return e.id;
        return std::nullopt;
    }

    std::vector<VarId> ids_of(VarKind kind) const {
        std::vector<VarId> out;
        for (const auto& e : entries_)
            if (e.kind == kind) out.push_back(e.id);
        return out;
    }

  private:
    std::vector<VarEntry> entries_;
};

}  // namespace qfact
