#include "streamcode/stream.hpp"

#include <fstream>
#include <iterator>

#include "streamcode/errors.hpp"

namespace streamcode {

Symbol SymbolStream::read_next() {
    if (exhausted()) throw EndOfStream("stream exhausted at position " + std::to_string(cursor_));
    ++reads_;
    return data_[cursor_++];
}

std::optional<Symbol> SymbolStream::peek() const {
    if (exhausted()) return std::nullopt;
    return data_[cursor_];
}

void SymbolStream::skip(std::size_t count) {
    if (count > remaining()) throw EndOfStream("skip past the end of the stream");
    cursor_ += count;
    reads_ += count;
}

SymbolStream::Run SymbolStream::read_run(std::size_t max_len) {
    Run run;
    run.symbol = read_next();
    run.repeat = 1;
    while (run.repeat < max_len && !exhausted() && data_[cursor_] == run.symbol) {
        ++cursor_;
        ++reads_;
        ++run.repeat;
    }
    return run;
}

void OutputTape::write(std::size_t index, Symbol bit) {
    if (!written_.empty() && index <= written_.back().first)
        throw OutOfOrderWrite("write at " + std::to_string(index) + " after " + std::to_string(written_.back().first));
    written_.emplace_back(index, bit);
}

bool OutputTape::equals(std::span<const Symbol> x) const {
    if (written_.size() != x.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (written_[i].first != i || written_[i].second != x[i]) return false;
    return true;
}

void StateWriter::put(std::uint64_t value, unsigned width) {
    for (unsigned b = 0; b < width; ++b) {
        if (bits_ % 8 == 0) bytes_.push_back(0);
        if ((value >> b) & 1U) bytes_.back() |= static_cast<std::uint8_t>(1U << (bits_ % 8));
        ++bits_;
    }
}

void StateWriter::put_bits(std::span<const Symbol> bits) {
    for (Symbol b : bits) put(b & 1U, 1);
}

unsigned bit_width_for(std::uint64_t bound) {
    unsigned w = 0;
    while (w < 64 && (bound >> w) != 0) ++w;
    return w;
}

void MemoryLedger::checkpoint(std::size_t state_bits) {
    ++checkpoints_;
    if (state_bits > peak_bits_) peak_bits_ = state_bits;
    if (peak_bits_ > budget_bits_) exceeded_ = true;
}

namespace {

constexpr char kMagic[4] = {'S', 'C', 'S', '1'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
    return v;
}

unsigned symbol_width(const StreamFile& f) {
    switch (f.kind) {
        case SymbolKind::Bits: return 1;
        case SymbolKind::Field: return f.k;
        case SymbolKind::FieldErased: return f.k + 1U;
    }
    throw FormatError("unknown symbol kind");
}

}  // namespace

std::vector<std::uint8_t> serialize_stream(const StreamFile& f) {
    if (f.kind == SymbolKind::Bits && f.k != 1) throw FormatError("bit streams have k = 1");
    if (f.k == 0 || f.k > 24) throw FormatError("symbol width must be 1..24");
    const unsigned w = symbol_width(f);
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    put_u64(out, f.n);
    out.push_back(static_cast<std::uint8_t>(f.kind));
    out.push_back(f.k);
    put_u64(out, f.symbols.size());
    StateWriter body;
    const std::uint64_t limit = std::uint64_t{1} << f.k;
    for (Symbol s : f.symbols) {
        if (s == kErasure) {
            if (f.kind != SymbolKind::FieldErased) throw FormatError("erasure in a stream without erasure kind");
            body.put(limit, w);
        } else {
            if (s >= limit) throw FormatError("symbol exceeds the declared width");
            body.put(s, w);
        }
    }
    out.insert(out.end(), body.bytes().begin(), body.bytes().end());
    return out;
}

StreamFile parse_stream(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t header = 4 + 8 + 1 + 1 + 8;
    if (bytes.size() < header || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
        throw FormatError("not a stream file");
    StreamFile f;
    f.n = get_u64(bytes, 4);
    const auto kind = bytes[12];
    if (kind > 2) throw FormatError("unknown symbol kind");
    f.kind = static_cast<SymbolKind>(kind);
    f.k = bytes[13];
    if (f.k == 0 || f.k > 24 || (f.kind == SymbolKind::Bits && f.k != 1)) throw FormatError("bad symbol width");
    const std::uint64_t length = get_u64(bytes, 14);
    const unsigned w = symbol_width(f);
    const std::size_t body_bits = static_cast<std::size_t>(length) * w;
    if (bytes.size() != header + (body_bits + 7) / 8) throw FormatError("stream body has the wrong size");
    f.symbols.resize(length);
    std::size_t bit = header * 8;
    for (auto& s : f.symbols) {
        std::uint64_t v = 0;
        for (unsigned b = 0; b < w; ++b, ++bit)
            if ((bytes[bit / 8] >> (bit % 8)) & 1U) v |= std::uint64_t{1} << b;
        if (f.kind == SymbolKind::FieldErased && (v >> f.k)) {
            if (v != (std::uint64_t{1} << f.k)) throw FormatError("erasure flag with a nonzero payload");
            s = kErasure;
        } else {
            s = static_cast<Symbol>(v);
        }
    }
    return f;
}

void write_stream_file(const std::filesystem::path& path, const StreamFile& f) {
    const auto bytes = serialize_stream(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed: " + path.string());
}

StreamFile read_stream_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_stream(bytes);
}

}  // namespace streamcode
