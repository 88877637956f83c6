#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfact/coeff.hpp"
#include "qfact/errors.hpp"
#include "qfact/polynomial.hpp"
#include "qfact/registry.hpp"

namespace qfact {

enum class Method : std::uint8_t { direct, table };

inline const char* method_name(Method m) { return m == Method::direct ? "direct" : "table"; }

/// Cost polynomial plus everything needed to decode its minimizers.
struct CostFunction {
    Poly poly;
    VariableRegistry registry;
    Method method = Method::direct;
    Int n;
    std::uint32_t l1 = 0, l2 = 0;
    bool fixed_leading = false;  // table encodings always fix the leading bits
};

inline std::uint32_t bit_length(const Int& n) {
    if (n <= 0) throw InternalError("bit_length of non-positive value");
    return static_cast<std::uint32_t>(boost::multiprecision::msb(n)) + 1;
}

inline int bit_of(const Int& n, std::uint32_t k) {
    return boost::multiprecision::bit_test(n, k) ? 1 : 0;
}

inline Int pow2_int(std::uint32_t k) {
    Int v = 1;
    return v << k;
}

namespace detail {
inline void check_factor_input(const Int& n, std::uint32_t l1, std::uint32_t l2) {
    if (n % 2 == 0)
        throw EvenInputError("n = " + n.str() +
                             " is even; factors with a fixed trailing 1 bit cannot represent it");
    if (n < 9) throw LengthTooSmallError("n must be an odd composite >= 9");
    if (l1 < 2 || l2 < 2) throw LengthTooSmallError("factor bit lengths must be at least 2");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Direct method: f = (n - p*q)^2 over the unknown factor bits.
// Bit i of a factor maps to weight 2^i, so within each factor the variable
// with the largest id is the most significant unknown bit.
// ---------------------------------------------------------------------------

inline CostFunction encode_direct(const Int& n, std::uint32_t l1, std::uint32_t l2,
                                  bool fixed_leading = false) {
    detail::check_factor_input(n, l1, l2);

    CostFunction cf;
    cf.method = Method::direct;
    cf.n = n;
    cf.l1 = l1;
    cf.l2 = l2;
    cf.fixed_leading = fixed_leading;

    const std::uint32_t top1 = fixed_leading ? l1 - 1 : l1;
    const std::uint32_t top2 = fixed_leading ? l2 - 1 : l2;

    Poly p = Poly::constant(1);
    for (std::uint32_t i = 1; i < top1; ++i) {
        VarId v = cf.registry.add(VarKind::factor_p, i, "x" + std::to_string(cf.registry.size() + 1));
        p += Poly::variable(v) * Rat(pow2_int(i));
    }
    if (fixed_leading) p += Poly::constant(Rat(pow2_int(l1 - 1)));

    Poly q = Poly::constant(1);
    for (std::uint32_t j = 1; j < top2; ++j) {
        VarId v = cf.registry.add(VarKind::factor_q, j, "x" + std::to_string(cf.registry.size() + 1));
        q += Poly::variable(v) * Rat(pow2_int(j));
    }
    if (fixed_leading) q += Poly::constant(Rat(pow2_int(l2 - 1)));

    Poly residual = Poly::constant(Rat(n)) - p * q;
    cf.poly = residual.squared();
    return cf;
}

// ---------------------------------------------------------------------------
// Modified multiplication table: columns of partial products grouped into
// blocks, one carry register per block boundary.
// ---------------------------------------------------------------------------

struct ColumnEntry {
    enum class Kind : std::uint8_t { one, p_bit, q_bit, product, carry_in };
    Kind kind = Kind::one;
    VarId a = 0;  // p_bit/q_bit/carry_in: the variable. product: the p variable.
    VarId b = 0;  // product: the q variable.
};

struct Column {
    std::uint32_t power = 0;
    std::vector<ColumnEntry> entries;
};

struct Block {
    std::uint32_t lo = 0;     // lowest column power in the block
    std::uint32_t width = 0;  // number of columns
    Int target;               // matching slice of n
    std::vector<VarId> carries;  // carry-out register, least significant bit first
};

struct TableLayout {
    std::vector<std::uint32_t> widths;
    // Optional per-block carry register lengths (final block excluded). When
    // absent the register is sized from the block's maximum possible sum.
    std::optional<std::vector<std::uint32_t>> carry_lengths;
};

struct BlockSystem {
    Int n;
    std::uint32_t l1 = 0, l2 = 0;
    std::vector<Column> columns;  // powers 1 .. cover, index = power - 1
    std::vector<Block> blocks;
    VariableRegistry registry;

    const Column& column(std::uint32_t power) const { return columns.at(power - 1); }

    std::size_t carry_count() const {
        std::size_t k = 0;
        for (const auto& b : blocks) k += b.carries.size();
        return k;
    }

    Poly column_poly(const Column& col) const {
        Poly sum;
        for (const auto& e : col.entries) {
            switch (e.kind) {
                case ColumnEntry::Kind::one: sum += Poly::constant(1); break;
                case ColumnEntry::Kind::p_bit:
                case ColumnEntry::Kind::q_bit:
                case ColumnEntry::Kind::carry_in: sum += Poly::variable(e.a); break;
                case ColumnEntry::Kind::product: {
                    Poly t;
                    t.add_term({e.a, e.b}, 1);
                    sum += t;
                    break;
                }
            }
        }
        return sum;
    }

    /// Left-hand side of the block equation: weighted column sums minus the
    /// target and the carry-out register.
    Poly block_poly(const Block& b) const {
        Poly expr;
        for (std::uint32_t r = 0; r < b.width; ++r)
            expr += column_poly(column(b.lo + r)) * Rat(pow2_int(r));
        expr -= Poly::constant(Rat(b.target));
        for (std::size_t r = 0; r < b.carries.size(); ++r)
            expr -= Poly::variable(b.carries[r]) * Rat(pow2_int(b.width + static_cast<std::uint32_t>(r)));
        return expr;
    }

    /// Largest value the block expression's positive part can take with every
    /// bit and incoming carry set to 1.
    Int max_block_sum(const Block& b) const {
        Int s = 0;
        for (std::uint32_t r = 0; r < b.width; ++r)
            s += pow2_int(r) * Int(column(b.lo + r).entries.size());
        return s;
    }
};

inline TableLayout default_table_layout(const Int& n, std::uint32_t l1, std::uint32_t l2) {
    std::uint32_t cover = std::max(bit_length(n), l1 + l2 - 1) - 1;
    TableLayout layout;
    while (cover > 0) {
        std::uint32_t w = std::min<std::uint32_t>(3, cover);
        layout.widths.push_back(w);
        cover -= w;
    }
    return layout;
}

/// Bundled layouts reproducing the worked 143 / 59989 / 376289 tables.
inline std::optional<TableLayout> preset_table_layout(const Int& n, std::uint32_t l1,
                                                      std::uint32_t l2) {
    if (n == 143 && l1 == 4 && l2 == 4) return TableLayout{{2, 2, 3}, std::nullopt};
    if (n == 59989 && l1 == 8 && l2 == 8) return TableLayout{{3, 3, 3, 3, 3}, std::nullopt};
    if (n == 376289 && l1 == 10 && l2 == 10)
        return TableLayout{{4, 3, 3, 3, 3, 2}, std::vector<std::uint32_t>{2, 3, 4, 3, 2}};
    return std::nullopt;
}

inline BlockSystem build_block_system(const Int& n, std::uint32_t l1, std::uint32_t l2,
                                      const TableLayout& layout) {
    detail::check_factor_input(n, l1, l2);

    BlockSystem bs;
    bs.n = n;
    bs.l1 = l1;
    bs.l2 = l2;

    const std::uint32_t need = std::max(bit_length(n), l1 + l2 - 1) - 1;
    std::uint32_t cover = 0;
    for (std::uint32_t w : layout.widths) {
        if (w < 1) throw WidthMismatchError("block widths must be at least 1");
        cover += w;
    }
    if (cover < need)
        throw WidthMismatchError("block widths cover " + std::to_string(cover) +
                                 " columns but the table needs " + std::to_string(need));

    // Factor bit variables. Trailing and leading bits are fixed to 1.
    std::vector<VarId> pbit(l1, 0), qbit(l2, 0);
    for (std::uint32_t i = 1; i + 1 < l1; ++i)
        pbit[i] = bs.registry.add(VarKind::factor_p, i, "p" + std::to_string(i));
    for (std::uint32_t j = 1; j + 1 < l2; ++j)
        qbit[j] = bs.registry.add(VarKind::factor_q, j, "q" + std::to_string(j));
    auto p_fixed = [&](std::uint32_t i) { return i == 0 || i == l1 - 1; };
    auto q_fixed = [&](std::uint32_t j) { return j == 0 || j == l2 - 1; };

    bs.columns.resize(cover);
    for (std::uint32_t k = 1; k <= cover; ++k) {
        Column& col = bs.columns[k - 1];
        col.power = k;
        for (std::uint32_t j = 0; j < l2; ++j) {
            if (k < j || k - j >= l1) continue;
            std::uint32_t i = k - j;
            ColumnEntry e;
            if (p_fixed(i) && q_fixed(j)) {
                e.kind = ColumnEntry::Kind::one;
            } else if (q_fixed(j)) {
                e.kind = ColumnEntry::Kind::p_bit;
                e.a = pbit[i];
            } else if (p_fixed(i)) {
                e.kind = ColumnEntry::Kind::q_bit;
                e.a = qbit[j];
            } else {
                e.kind = ColumnEntry::Kind::product;
                e.a = pbit[i];
                e.b = qbit[j];
            }
            col.entries.push_back(e);
        }
    }

    // Blocks with their targets.
    std::uint32_t lo = 1;
    for (std::uint32_t w : layout.widths) {
        Block b;
        b.lo = lo;
        b.width = w;
        b.target = 0;
        for (std::uint32_t r = 0; r < w; ++r) {
            std::uint32_t power = lo + r;
            if (power < bit_length(n) && bit_of(n, power)) b.target += pow2_int(r);
        }
        bs.blocks.push_back(b);
        lo += w;
    }

    // Carry registers, low block first so incoming carries are in place when
    // the next block's maximum sum is measured.
    if (layout.carry_lengths && layout.carry_lengths->size() != bs.blocks.size() - 1)
        throw WidthMismatchError("carry length list must have one entry per non-final block");
    std::uint32_t carry_no = 0;
    for (std::size_t bi = 0; bi + 1 < bs.blocks.size(); ++bi) {
        Block& b = bs.blocks[bi];
        std::uint32_t len;
        if (layout.carry_lengths) {
            len = (*layout.carry_lengths)[bi];
        } else {
            Int max_carry = bs.max_block_sum(b) >> b.width;
            len = max_carry > 0 ? bit_length(max_carry) : 0;
        }
        // A register bit landing beyond the covered columns could never be
        // consumed by a later block equation, so clamp.
        std::uint32_t room = cover - (b.lo + b.width) + 1;
        len = std::min(len, room);
        for (std::uint32_t r = 0; r < len; ++r) {
            ++carry_no;
            VarId c = bs.registry.add(VarKind::carry, carry_no, "c" + std::to_string(carry_no));
            b.carries.push_back(c);
            ColumnEntry e;
            e.kind = ColumnEntry::Kind::carry_in;
            e.a = c;
            bs.columns[b.lo + b.width + r - 1].entries.push_back(e);
        }
    }
    return bs;
}

inline BlockSystem build_block_system(const Int& n, std::uint32_t l1, std::uint32_t l2) {
    if (auto preset = preset_table_layout(n, l1, l2)) return build_block_system(n, l1, l2, *preset);
    return build_block_system(n, l1, l2, default_table_layout(n, l1, l2));
}

inline CostFunction encode_table(const BlockSystem& bs) {
    CostFunction cf;
    cf.method = Method::table;
    cf.n = bs.n;
    cf.l1 = bs.l1;
    cf.l2 = bs.l2;
    cf.fixed_leading = true;
    cf.registry = bs.registry;
    for (const auto& b : bs.blocks) cf.poly += bs.block_poly(b).squared();
    return cf;
}

// ---------------------------------------------------------------------------
// Reference assignments: bit values for known factors, including the carry
// registers implied by the block structure.
// ---------------------------------------------------------------------------

/// Assignment vector (indexed by variable id) putting p and q into the table
/// encoding. Throws if the factors do not fit the layout.
inline std::vector<int> table_assignment(const BlockSystem& bs, const Int& p, const Int& q) {
    if (p * q != bs.n) throw InternalError("table_assignment: p*q != n");
    if (bit_length(p) != bs.l1 || bit_length(q) != bs.l2)
        throw InternalError("table_assignment: factor lengths do not match the layout");
    if (p % 2 == 0 || q % 2 == 0) throw InternalError("table_assignment: factors must be odd");

    std::vector<int> bits(bs.registry.size() + 1, -1);
    for (const auto& e : bs.registry.entries()) {
        if (e.kind == VarKind::factor_p) bits[e.id] = bit_of(p, e.index);
        if (e.kind == VarKind::factor_q) bits[e.id] = bit_of(q, e.index);
    }

    auto entry_value = [&](const ColumnEntry& e) -> Int {
        switch (e.kind) {
            case ColumnEntry::Kind::one: return 1;
            case ColumnEntry::Kind::p_bit:
            case ColumnEntry::Kind::q_bit: return bits[e.a];
            case ColumnEntry::Kind::product: return bits[e.a] * bits[e.b];
            case ColumnEntry::Kind::carry_in:
                if (bits[e.a] < 0) throw InternalError("carry consumed before it was derived");
                return bits[e.a];
        }
        return 0;
    };

    for (const auto& b : bs.blocks) {
        Int sum = 0;
        for (std::uint32_t r = 0; r < b.width; ++r) {
            Int colsum = 0;
            for (const auto& e : bs.column(b.lo + r).entries) colsum += entry_value(e);
            sum += colsum * pow2_int(r);
        }
        Int rem = sum - b.target;
        if (rem < 0 || rem % pow2_int(b.width) != 0)
            throw InternalError("block sum does not reduce to its target");
        Int carry = rem >> b.width;
        for (std::size_t r = 0; r < b.carries.size(); ++r) {
            bits[b.carries[r]] = static_cast<int>(carry & 1);
            carry >>= 1;
        }
        if (carry != 0)
            throw InternalError("carry register too small for the factor pair");
    }
    return bits;
}

/// Assignment for the direct encoding.
inline std::vector<int> direct_assignment(const CostFunction& cf, const Int& p, const Int& q) {
    std::vector<int> bits(cf.registry.size() + 1, -1);
    for (const auto& e : cf.registry.entries()) {
        if (e.kind == VarKind::factor_p) bits[e.id] = bit_of(p, e.index);
        if (e.kind == VarKind::factor_q) bits[e.id] = bit_of(q, e.index);
    }
    return bits;
}

// ---------------------------------------------------------------------------
// Qubit accounting.
// ---------------------------------------------------------------------------

struct QubitBreakdown {
    std::uint64_t factor_bits = 0;
    std::uint64_t carry_bits = 0;
    std::uint64_t ancillas = 0;
    bool from_formula = false;  // true when counted by the size formula only
    std::uint64_t total() const { return factor_bits + carry_bits + ancillas; }
};

/// True when reducing the block system to quadratic needs an ancilla for the
/// product a*b sitting in `blk`. Any companion with an extra variable makes a
/// cubic or quartic cross term, and no cross term can cancel: companions are
/// distinct monomials and all positive-weight pairs add with the same sign.
inline bool product_needs_ancilla(const BlockSystem& bs, const Block& blk, VarId a, VarId b) {
    if (!blk.carries.empty()) return true;
    for (std::uint32_t r = 0; r < blk.width; ++r) {
        for (const auto& e : bs.column(blk.lo + r).entries) {
            switch (e.kind) {
                case ColumnEntry::Kind::one: break;
                case ColumnEntry::Kind::p_bit:
                case ColumnEntry::Kind::q_bit:
                    if (e.a != a && e.a != b) return true;
                    break;
                case ColumnEntry::Kind::carry_in: return true;
                case ColumnEntry::Kind::product:
                    if (e.a != a || e.b != b) return true;
                    break;
            }
        }
    }
    return false;
}

inline std::uint64_t count_table_ancillas(const BlockSystem& bs) {
    std::uint64_t count = 0;
    for (const auto& blk : bs.blocks) {
        for (std::uint32_t r = 0; r < blk.width; ++r) {
            for (const auto& e : bs.column(blk.lo + r).entries) {
                if (e.kind != ColumnEntry::Kind::product) continue;
                if (product_needs_ancilla(bs, blk, e.a, e.b)) ++count;
            }
        }
    }
    return count;
}

/// Size-formula accounting for the table method: about log N carries plus the
/// full grid of bit products.
inline QubitBreakdown table_formula_counts(std::uint32_t n_bits) {
    std::uint32_t l1 = (n_bits + 1) / 2, l2 = n_bits / 2;
    QubitBreakdown qb;
    qb.factor_bits = (l1 - 2) + (l2 - 2);
    qb.carry_bits = n_bits;
    qb.ancillas = std::uint64_t(l1 - 2) * (l2 - 2);
    qb.from_formula = true;
    return qb;
}

/// Direct-method size formula for equal factor lengths: 2(l-1) variables
/// before reduction, (l+2)(l-1) after.
struct DirectFormulaCounts {
    std::uint64_t before = 0;
    std::uint64_t after = 0;
};
inline DirectFormulaCounts direct_formula_counts(std::uint32_t l) {
    return {2ull * (l - 1), std::uint64_t(l + 2) * (l - 1)};
}

inline QubitBreakdown estimate_qubits_table(const Int& n, std::uint32_t l1, std::uint32_t l2,
                                            const TableLayout* layout = nullptr) {
    detail::check_factor_input(n, l1, l2);
    if (!layout && !preset_table_layout(n, l1, l2) && bit_length(n) > 64)
        return table_formula_counts(bit_length(n));
    BlockSystem bs = layout ? build_block_system(n, l1, l2, *layout) : build_block_system(n, l1, l2);
    QubitBreakdown qb;
    qb.factor_bits = (l1 - 2) + (l2 - 2);
    qb.carry_bits = bs.carry_count();
    qb.ancillas = count_table_ancillas(bs);
    return qb;
}

}  // namespace qfact
