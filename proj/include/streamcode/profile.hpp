#pragma once

// Flat key=value profiles. Quantities with a formula are
// computed from it unless written as `override.<key>=value`; a plain key for a
// derived quantity is accepted only when it equals the formula value.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "streamcode/channel.hpp"
#include "streamcode/codec_repeat.hpp"
#include "streamcode/codec_tensor.hpp"

namespace streamcode {

struct ExperimentSettings {
    double rho = 0.0;
    AttackKind attack = AttackKind::UniformFlip;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double erasure_share = 0.5;
    std::size_t copy_index = 0;           ///< copy_kill target (repeat) or block (tensor)
    std::string functional = "random";    ///< tensor: random, zero, ones or a hex string
    std::size_t blockzero_samples = 4;    ///< clean runs used to estimate output sets
    std::size_t blockzero_step = 0;       ///< window shift per copy index
    unsigned workers = 1;
};

struct Profile {
    std::string name;
    std::string codec;  ///< "repeat" or "tensor"
    std::map<std::string, std::string> base;     ///< resolved plain settings
    std::map<std::string, std::string> derived;  ///< resolved derived quantities
    std::set<std::string> overrides;             ///< derived keys that were overridden
    std::map<std::string, std::string> raw;      ///< entries as written, keys keep their prefix

    RepeatParams repeat;
    TensorParams tensor;
    ExperimentSettings exp;

    /// Canonical text; parsing it yields the same profile.
    std::string text() const;
    nlohmann::json to_json() const;
    /// Copy with one plain or `override.` key replaced.
    Profile with(const std::string& key, const std::string& value) const;
    Profile with(const std::map<std::string, std::string>& entries) const;
};

/// Throws ProfileError listing every problem found.
Profile parse_profile(const std::string& text);
Profile builtin_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();
/// A built-in name, a profile file, or a report JSON carrying profile.text.
Profile load_profile(const std::string& name_or_path);

}  // namespace streamcode
