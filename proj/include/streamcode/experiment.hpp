#pragma once

// Encode, corrupt and decode loops over a profile, with JSON reports.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "streamcode/profile.hpp"

namespace streamcode {

/// Deterministic invariants; any nonzero count makes the run fail.
struct InvariantCounts {
    std::size_t channel_budget = 0;  ///< corruption beyond floor(rho m)
    std::size_t memory_budget = 0;   ///< decoder ledger above budget_bits
    std::size_t overlap_cap = 0;     ///< live recursion requests above cap^depth
    std::size_t single_pass = 0;     ///< reads beyond the stream or out of step with the decoder
    std::size_t out_of_order = 0;    ///< tape write with a non-increasing index

    std::size_t total() const { return channel_budget + memory_budget + overlap_cap + single_pass + out_of_order; }
    nlohmann::json to_json() const;
};

/// Trial i uses seed profile.exp.seed + i for message, corruption and decoding.
nlohmann::json run_experiment(const Profile& profile);
/// True when the report's invariant counters are all zero.
bool invariants_clean(const nlohmann::json& report);

/// Brute-force distance checks for every claimed bound with a message space
/// of at most 2^12; larger codes are listed as skipped.
nlohmann::json verify_code_tables(const Profile* profile = nullptr);

/// Output sets of the repeat decoder per copy, estimated from clean runs.
std::vector<std::set<std::size_t>> estimate_repeat_outputs(const BinaryLdc& ldc, const RepeatParams& params,
                                                           std::size_t samples, std::uint64_t seed);

/// Tensor functional from a spec: random, zero, ones, or hex digits (MSB first).
std::vector<Symbol> functional_bits(const std::string& spec, std::size_t n, Rng& rng);
std::vector<Symbol> hex_to_bits(const std::string& hex, std::size_t n);
std::string bits_to_hex(std::span<const Symbol> bits);

}  // namespace streamcode
