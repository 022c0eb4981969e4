#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "streamcode/gf.hpp"

namespace streamcode {

/// Random-access view of a received word.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual std::size_t size() const = 0;
    virtual Symbol read(std::size_t index) const = 0;
};

/// Oracle over an in-memory word that can log every index it is asked for.
class WordOracle : public Oracle {
public:
    explicit WordOracle(std::span<const Symbol> word, bool record = false) : word_(word), record_(record) {}
    std::size_t size() const override { return word_.size(); }
    Symbol read(std::size_t index) const override {
        if (record_) log_.push_back(index);
        return word_[index];
    }
    const std::vector<std::size_t>& log() const { return log_; }

private:
    std::span<const Symbol> word_;
    bool record_;
    mutable std::vector<std::size_t> log_;
};

/// Answers for a fixed list of query indices.
inline std::vector<Symbol> read_all(const Oracle& oracle, std::span<const std::size_t> queries) {
    std::vector<Symbol> out;
    out.reserve(queries.size());
    for (std::size_t q : queries) out.push_back(oracle.read(q));
    return out;
}

}  // namespace streamcode
