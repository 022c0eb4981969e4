#pragma once

// Single-pass input stream, write-only output tape, and a memory ledger that
// measures decoder state through a canonical bit serialization.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamcode/codes.hpp"

namespace streamcode {

/// Forward-only reader. Every position is handed out at most once.
class SymbolStream {
public:
    explicit SymbolStream(std::vector<Symbol> data) : data_(std::move(data)) {}

    std::size_t size() const { return data_.size(); }
    std::size_t position() const { return cursor_; }
    bool exhausted() const { return cursor_ >= data_.size(); }
    std::size_t remaining() const { return data_.size() - cursor_; }

    /// Throws EndOfStream when exhausted.
    Symbol read_next();
    /// Next symbol without consuming it (one symbol of look-ahead).
    std::optional<Symbol> peek() const;
    /// Consume `count` symbols without returning them.
    void skip(std::size_t count);

    struct Run {
        Symbol symbol = 0;
        std::size_t repeat = 0;
    };
    /// Consume the maximal run (at most max_len) of the next symbol.
    Run read_run(std::size_t max_len = SIZE_MAX);

    /// Symbols consumed so far; equals position() by construction.
    std::size_t reads() const { return reads_; }

private:
    std::vector<Symbol> data_;
    std::size_t cursor_ = 0;
    std::size_t reads_ = 0;
};

/// Write-only tape; indices must strictly increase.
class OutputTape {
public:
    void write(std::size_t index, Symbol bit);
    const std::vector<std::pair<std::size_t, Symbol>>& entries() const { return written_; }
    std::size_t size() const { return written_.size(); }
    std::optional<std::size_t> last_index() const {
        return written_.empty() ? std::nullopt : std::optional(written_.back().first);
    }
    /// True when the tape is exactly (0, x_0) ... (n-1, x_{n-1}).
    bool equals(std::span<const Symbol> x) const;

private:
    std::vector<std::pair<std::size_t, Symbol>> written_;
};

/// Canonical bit serialization used for space accounting.
class StateWriter {
public:
    void put(std::uint64_t value, unsigned width);
    void put_bits(std::span<const Symbol> bits);
    std::size_t bits() const { return bits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bits_ = 0;
};

/// Bits needed to hold any value in [0, bound].
unsigned bit_width_for(std::uint64_t bound);

class MemoryLedger {
public:
    explicit MemoryLedger(std::size_t budget_bits = SIZE_MAX) : budget_bits_(budget_bits) {}

    void checkpoint(std::size_t state_bits);
    template <class State>
    void checkpoint_state(const State& state) {
        StateWriter w;
        state.serialize(w);
        checkpoint(w.bits());
    }

    std::size_t peak_bits() const { return peak_bits_; }
    std::size_t budget_bits() const { return budget_bits_; }
    bool budget_exceeded() const { return exceeded_; }
    std::size_t checkpoints() const { return checkpoints_; }

private:
    std::size_t budget_bits_;
    std::size_t peak_bits_ = 0;
    std::size_t checkpoints_ = 0;
    bool exceeded_ = false;
};

enum class SymbolKind : std::uint8_t {
    Bits = 0,         ///< one bit per symbol
    Field = 1,        ///< k bits per symbol
    FieldErased = 2,  ///< k + 1 bits per symbol, top bit marks an erasure
};

/// File layout: "SCS1", u64 n, u8 kind, u8 k, u64 length, then the symbols
/// packed LSB-first; integers little-endian.
struct StreamFile {
    std::uint64_t n = 0;  ///< message length the stream encodes
    SymbolKind kind = SymbolKind::Bits;
    std::uint8_t k = 1;
    std::vector<Symbol> symbols;
};

std::vector<std::uint8_t> serialize_stream(const StreamFile& f);
StreamFile parse_stream(std::span<const std::uint8_t> bytes);
void write_stream_file(const std::filesystem::path& path, const StreamFile& f);
StreamFile read_stream_file(const std::filesystem::path& path);

}  // namespace streamcode
