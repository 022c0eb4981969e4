#include "streamcode/channel.hpp"

#include <algorithm>
#include <cmath>

#include "streamcode/errors.hpp"

namespace streamcode {

ErrorBudget::ErrorBudget(double rho, std::size_t m) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("rho must lie in [0, 1]");
    limit_ = static_cast<std::size_t>(std::floor(rho * static_cast<double>(m) + 1e-9));
    limit_ = std::min(limit_, m);
}

bool ErrorBudget::charge(std::size_t half_units) {
    if (half_units > remaining_half()) return false;
    used_half_ += half_units;
    return true;
}

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::UniformFlip: return "uniform_flip";
        case AttackKind::Burst: return "burst";
        case AttackKind::CopyKill: return "copy_kill";
        case AttackKind::BlockzeroWindow: return "blockzero_window";
        case AttackKind::ErasureMix: return "erasure_mix";
    }
    return "?";
}

AttackKind attack_from_string(const std::string& s) {
    for (auto k : {AttackKind::UniformFlip, AttackKind::Burst, AttackKind::CopyKill, AttackKind::BlockzeroWindow,
                   AttackKind::ErasureMix})
        if (to_string(k) == s) return k;
    throw InvalidArgument("unknown attack strategy: " + s);
}

namespace {

Symbol other_symbol(Symbol s, Symbol alphabet, Rng& rng) {
    if (alphabet == 2) return s ^ 1U;
    return static_cast<Symbol>((s + 1 + rng.below(alphabet - 1)) % alphabet);
}

// First `count` entries of a uniformly random permutation of [0, m).
std::vector<std::size_t> distinct_positions(std::size_t m, std::size_t count, Rng& rng) {
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(m - i)]);
    idx.resize(count);
    return idx;
}

void check_budget(const Corruption& c) {
    if (2 * c.changed + c.erased > 2 * c.limit) throw Error("corruption exceeded its budget");
}

}  // namespace

Corruption corrupt(std::span<const Symbol> word, const AttackStrategy& st, double rho, Rng& rng) {
    if (st.alphabet < 2) throw InvalidArgument("alphabet must have at least two symbols");
    const std::size_t m = word.size();
    ErrorBudget budget(rho, m);
    Corruption out;
    out.word.assign(word.begin(), word.end());
    out.limit = budget.limit();
    auto change = [&](std::size_t i) {
        if (out.word[i] == kErasure) return;
        out.word[i] = other_symbol(out.word[i], st.alphabet, rng);
        ++out.changed;
    };

    switch (st.kind) {
        case AttackKind::UniformFlip:
            for (std::size_t i : distinct_positions(m, budget.limit(), rng)) change(i);
            break;
        case AttackKind::Burst: {
            const std::size_t len = budget.limit();
            const std::size_t start = m > len ? rng.below(m - len + 1) : 0;
            for (std::size_t i = start; i < start + len; ++i) change(i);
            break;
        }
        case AttackKind::CopyKill: {
            if (st.block_len == 0) throw InvalidArgument("copy_kill needs the copy length");
            const std::size_t begin = st.copy_index * st.block_len;
            if (begin + st.block_len > m) throw InvalidArgument("copy index out of range");
            const std::size_t len = std::min(st.block_len, budget.limit());
            for (std::size_t i = begin; i < begin + len; ++i) change(i);
            break;
        }
        case AttackKind::BlockzeroWindow:
            return blockzero_attack(word, st.block_len, st.blocks, rho);
        case AttackKind::ErasureMix: {
            if (!(st.erasure_share >= 0.0 && st.erasure_share <= 1.0))
                throw InvalidArgument("erasure share must lie in [0, 1]");
            const std::size_t half = 2 * budget.limit();
            std::size_t erasures = static_cast<std::size_t>(std::floor(st.erasure_share * static_cast<double>(half)));
            erasures = std::min(erasures, m);
            const std::size_t flips = std::min((half - erasures) / 2, m - erasures);
            const auto pos = distinct_positions(m, erasures + flips, rng);
            for (std::size_t i = 0; i < pos.size(); ++i) {
                if (i < erasures) {
                    if (out.word[pos[i]] == kErasure) continue;
                    out.word[pos[i]] = kErasure;
                    ++out.erased;
                } else {
                    change(pos[i]);
                }
            }
            break;
        }
    }
    check_budget(out);
    return out;
}

Corruption blockzero_attack(std::span<const Symbol> word, std::size_t block_len, std::span<const std::size_t> blocks,
                            double rho) {
    if (block_len == 0) throw InvalidArgument("block length must be positive");
    ErrorBudget budget(rho, word.size());
    Corruption out;
    out.word.assign(word.begin(), word.end());
    out.limit = budget.limit();
    for (std::size_t b : blocks) {
        const std::size_t begin = b * block_len;
        if (begin >= word.size()) throw InvalidArgument("block index out of range");
        const std::size_t end = std::min(word.size(), begin + block_len);
        std::size_t half = 0;
        for (std::size_t i = begin; i < end; ++i)
            if (out.word[i] != 0) half += 2;
        if (!budget.charge(half)) continue;
        std::fill(out.word.begin() + static_cast<std::ptrdiff_t>(begin),
                  out.word.begin() + static_cast<std::ptrdiff_t>(end), 0);
    }
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (out.word[i] == word[i]) continue;
        if (out.word[i] == kErasure)
            ++out.erased;
        else
            ++out.changed;
    }
    check_budget(out);
    return out;
}

std::vector<std::size_t> blockzero_targets(const std::vector<std::set<std::size_t>>& outputs, std::size_t j,
                                           std::size_t step, std::size_t width, std::size_t min_hits) {
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const std::size_t lo = j + i * step;
        const auto first = outputs[i].lower_bound(lo);
        const auto last = outputs[i].lower_bound(lo + width);
        if (static_cast<std::size_t>(std::distance(first, last)) >= min_hits) targets.push_back(i);
    }
    return targets;
}

double corruption_distance(std::span<const Symbol> a, std::span<const Symbol> b) {
    return static_cast<double>(half_distance(a, b)) / 2.0;
}

std::vector<double> distance_per_block(std::span<const Symbol> a, std::span<const Symbol> b, std::size_t block_len) {
    if (a.size() != b.size()) throw LengthMismatch("words differ in length");
    if (block_len == 0 || a.size() % block_len != 0) throw InvalidArgument("length is not a multiple of the block");
    std::vector<double> out;
    for (std::size_t i = 0; i < a.size(); i += block_len)
        out.push_back(corruption_distance(a.subspan(i, block_len), b.subspan(i, block_len)));
    return out;
}

StreamFile corruption_mask(std::span<const Symbol> original, std::span<const Symbol> corrupted, unsigned symbol_bits) {
    if (original.size() != corrupted.size()) throw LengthMismatch("words differ in length");
    StreamFile f;
    f.kind = SymbolKind::FieldErased;
    f.k = static_cast<std::uint8_t>(symbol_bits);
    f.n = original.size();
    f.symbols.reserve(original.size());
    for (std::size_t i = 0; i < original.size(); ++i)
        f.symbols.push_back(corrupted[i] == kErasure ? kErasure : (original[i] ^ corrupted[i]));
    return f;
}

Word apply_mask(std::span<const Symbol> original, const StreamFile& mask) {
    if (mask.symbols.size() != original.size()) throw LengthMismatch("mask length differs from the word");
    Word out(original.begin(), original.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask.symbols[i] == kErasure ? kErasure : out[i] ^ mask.symbols[i];
    return out;
}

}  // namespace streamcode
