#pragma once

// Budgeted corruption of codewords. Every strategy changes at most
// floor(rho m) symbols, erasures counting 1/2.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "streamcode/codes.hpp"
#include "streamcode/rng.hpp"
#include "streamcode/stream.hpp"

namespace streamcode {

/// Budget in half units: a changed symbol costs 2, an erasure 1.
class ErrorBudget {
public:
    ErrorBudget(double rho, std::size_t m);
    std::size_t limit() const { return limit_; }  ///< floor(rho m)
    std::size_t used_half() const { return used_half_; }
    std::size_t remaining_half() const { return 2 * limit_ - used_half_; }
    double used() const { return static_cast<double>(used_half_) / 2.0; }
    /// False (and nothing charged) when the cost does not fit.
    bool charge(std::size_t half_units);

private:
    std::size_t limit_;
    std::size_t used_half_ = 0;
};

enum class AttackKind { UniformFlip, Burst, CopyKill, BlockzeroWindow, ErasureMix };

std::string to_string(AttackKind k);
AttackKind attack_from_string(const std::string& s);

struct AttackStrategy {
    AttackKind kind = AttackKind::UniformFlip;
    Symbol alphabet = 2;                  ///< symbols are in [0, alphabet)
    std::size_t block_len = 0;            ///< copy length (copy_kill) or block length (blockzero)
    std::size_t copy_index = 0;           ///< copy_kill target
    std::vector<std::size_t> blocks;      ///< blockzero targets, in the order they are zeroed
    double erasure_share = 0.5;           ///< erasure_mix: share of the budget spent on erasures
};

struct Corruption {
    Word word;
    std::size_t changed = 0;   ///< symbols replaced by another symbol
    std::size_t erased = 0;    ///< symbols replaced by an erasure
    std::size_t limit = 0;     ///< floor(rho m)
    double distance() const { return static_cast<double>(changed) + static_cast<double>(erased) / 2.0; }
};

Corruption corrupt(std::span<const Symbol> word, const AttackStrategy& strategy, double rho, Rng& rng);

/// Zero whole blocks in the given order, charging the nonzero symbols of each
/// block; a block that no longer fits is skipped.
Corruption blockzero_attack(std::span<const Symbol> word, std::size_t block_len, std::span<const std::size_t> blocks,
                            double rho);

/// Heuristic window targeting: block i is attacked when the estimated output
/// set of block i has at least min_hits indices in [j + i step, j + i step + width).
std::vector<std::size_t> blockzero_targets(const std::vector<std::set<std::size_t>>& outputs, std::size_t j,
                                           std::size_t step, std::size_t width, std::size_t min_hits);

/// Corruption distance with erasures at 1/2.
double corruption_distance(std::span<const Symbol> a, std::span<const Symbol> b);
/// Distance per consecutive block of block_len symbols.
std::vector<double> distance_per_block(std::span<const Symbol> a, std::span<const Symbol> b, std::size_t block_len);

/// Replayable mask: XOR difference per symbol, or an erasure.
StreamFile corruption_mask(std::span<const Symbol> original, std::span<const Symbol> corrupted, unsigned symbol_bits);
Word apply_mask(std::span<const Symbol> original, const StreamFile& mask);

}  // namespace streamcode
