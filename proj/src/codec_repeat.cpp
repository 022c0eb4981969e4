#include "streamcode/codec_repeat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "streamcode/errors.hpp"

namespace streamcode {

RepeatParams RepeatParams::toy() {
    RepeatParams p;
    p.n = 64;
    p.eps = 0.1;
    p.copies = 12;
    p.checksums = 16;
    p.r_out = 22;
    p.budget_bits = 65536;
    p.ldc.n = 64;
    p.ldc.eps = 0.4;
    p.ldc.Q = 4096;
    p.ldc.field_degree = 4;
    p.ldc.degree = 3;
    p.ldc.variables = 3;
    p.ldc.t_smooth = 4;
    p.ldc.k_adv = 1;
    p.ldc.advice_iterations = 9;
    return p;
}

void RepeatParams::validate() const {
    auto fail = [](const std::string& why) { throw ProfileError("repeat codec: " + why); };
    if (n == 0) fail("n must be positive");
    if (ldc.n != n) fail("LDC message length must equal n");
    if (!(eps > 0.0 && eps < 0.25)) fail("eps must lie in (0, 1/4)");
    if (copies == 0) fail("k must be >= 1");
    if (checksums == 0) fail("v must be >= 1");
    if (r_out == 0) fail("r_out must be >= 1");
    ldc.validate();
}

std::string RepeatParams::describe() const {
    std::ostringstream out;
    out << "repeat n=" << n << " eps=" << eps << " k=" << copies << " v=" << checksums << " r_out=" << r_out
        << " budget_bits=" << budget_bits << " threshold=" << (loose_threshold ? "loose" : "strict") << " | "
        << ldc.describe();
    return out.str();
}

RepeatRegime repeat_regime(std::size_t n, double s) {
    const double logn = std::log2(static_cast<double>(n));
    RepeatRegime r;
    r.Q = std::min(std::pow(s, 0.1), std::pow(2.0, std::sqrt(logn)));
    r.k = r.Q * r.Q * static_cast<double>(n) / s;
    r.v = logn * logn;
    r.r_out = s / (r.Q * r.Q);
    return r;
}

Word enc_repeat(const BinaryLdc& ldc, const RepeatParams& params, std::span<const Symbol> x) {
    if (x.size() != params.n) throw LengthMismatch("message must have n bits");
    const auto y = ldc.encode(x);
    Word out;
    out.reserve(y.size() * params.copies);
    for (std::size_t i = 0; i < params.copies; ++i) out.insert(out.end(), y.begin(), y.end());
    return out;
}

namespace {

// Routes one copy of the stream to answer slots in stream order.
class CopyReader {
public:
    // Registers queries; returns the slot of the first answer.
    std::size_t add(std::span<const std::size_t> offsets) {
        const std::size_t first = slots_;
        for (std::size_t o : offsets) wants_.emplace_back(o, slots_++);
        return first;
    }
    // Reads exactly `len` symbols; answers()[slot] holds the symbol at that offset.
    void run(SymbolStream& s, std::size_t len) {
        std::sort(wants_.begin(), wants_.end());
        answers_.assign(slots_, 0);
        std::size_t w = 0;
        for (std::size_t off = 0; off < len; ++off) {
            const Symbol sym = s.read_next();
            for (; w < wants_.size() && wants_[w].first == off; ++w) answers_[wants_[w].second] = sym;
        }
    }
    std::span<const Symbol> answers(std::size_t first, std::size_t count) const {
        return std::span<const Symbol>(answers_).subspan(first, count);
    }

private:
    std::vector<std::pair<std::size_t, std::size_t>> wants_;
    std::vector<Symbol> answers_;
    std::size_t slots_ = 0;
};

void put_answers(StateWriter& w, std::span<const Symbol> answers, bool erasures) {
    for (Symbol a : answers) w.put(a == kErasure ? 2 : (a & 1U), erasures ? 2 : 1);
}

}  // namespace

RepeatResult dec_repeat(const BinaryLdc& ldc, const RepeatParams& params, SymbolStream& stream, Rng& rng,
                        bool record_trace) {
    params.validate();
    const std::size_t N = ldc.length();
    if (stream.remaining() % N != 0) throw LengthMismatch("stream length is not a multiple of N");
    const std::size_t available = stream.remaining() / N;
    const unsigned fd = ldc.params().field_degree;
    const unsigned pos_w = bit_width_for(N - 1);
    const unsigned copy_w = bit_width_for(available);

    RepeatResult res;
    MemoryLedger ledger(params.budget_bits);

    const auto adv = ldc.sample_advice(rng);
    const std::size_t u = adv.positions.size();
    res.positions = adv.positions;
    for (std::size_t i = 0; i < params.checksums; ++i) res.positions.push_back(rng.below(N));
    const std::size_t trackers = res.positions.size();

    // Phase 1: accumulate smooth-decoding confidences until every tracker settles.
    std::vector<std::array<std::uint64_t, 2>> P(trackers, {0, 0});
    std::uint64_t den = 1;
    bool settled = false;
    while (!settled) {
        if (res.copies_used == available) {
            res.exhausted = true;
            res.peak_bits = ledger.peak_bits();
            res.budget_exceeded = ledger.budget_exceeded();
            return res;
        }
        std::vector<SmoothPlan> plans;
        std::vector<std::size_t> first;
        CopyReader reader;
        for (std::size_t t = 0; t < trackers; ++t) {
            plans.push_back(ldc.plan_smooth(res.positions[t], rng));
            first.push_back(reader.add(plans.back().queries));
        }
        reader.run(stream, N);
        ++res.copies_used;

        StateWriter state;
        state.put(0, 64);  // generator state
        state.put(res.copies_used, copy_w);
        for (std::size_t t = 0; t < trackers; ++t) {
            const auto ans = reader.answers(first[t], plans[t].queries.size());
            const auto conf = ldc.finish_smooth(plans[t], ans);
            den = conf.den;
            P[t][0] += conf.num0;
            P[t][1] += conf.num1;
            const unsigned sum_w = bit_width_for(static_cast<std::uint64_t>(available) * den);
            state.put(res.positions[t], pos_w);
            state.put(P[t][0], sum_w);
            state.put(P[t][1], sum_w);
            for (Symbol c : plans[t].curves) state.put(c, fd);
            put_answers(state, ans, params.erasure_alphabet);
        }
        ledger.checkpoint(state.bits());
        if (record_trace) res.trace.push_back({P, den});

        const double level = params.settle_level() * static_cast<double>(den);
        settled = std::all_of(P.begin(), P.end(), [&](const auto& p) {
            return static_cast<double>(p[0]) > level || static_cast<double>(p[1]) > level;
        });
    }
    res.phase1_copies = res.copies_used;
    for (const auto& p : P) res.settled.push_back(p[1] > p[0] ? 1 : 0);
    const std::span<const Symbol> adv_values(res.settled.data(), u);

    // Phase 2: checksum test plus advice decoding of the next r_out bits.
    std::size_t next = 0;
    while (next < params.n) {
        if (res.copies_used == available) {
            res.exhausted = true;
            break;
        }
        const std::size_t count = std::min(params.r_out, params.n - next);
        CopyReader reader;
        std::vector<std::size_t> check_pos(res.positions.begin() + static_cast<std::ptrdiff_t>(u), res.positions.end());
        const std::size_t check_first = reader.add(check_pos);
        std::vector<AdvicePlan> plans;
        std::vector<std::size_t> first;
        for (std::size_t b = 0; b < count; ++b) {
            plans.push_back(ldc.plan_advice(ldc.message_position(next + b), adv, rng));
            first.push_back(reader.add(plans.back().queries));
        }
        reader.run(stream, N);
        ++res.copies_used;

        std::size_t c_half = 0;
        const auto checks = reader.answers(check_first, check_pos.size());
        for (std::size_t t = 0; t < checks.size(); ++t) {
            if (checks[t] == kErasure)
                c_half += 1;
            else if (checks[t] != res.settled[u + t])
                c_half += 2;
        }

        StateWriter state;
        state.put(0, 64);
        state.put(res.copies_used, copy_w);
        state.put(next, bit_width_for(params.n));
        state.put(c_half, bit_width_for(2 * params.checksums));
        for (std::size_t t = 0; t < trackers; ++t) {
            state.put(res.positions[t], pos_w);
            state.put(res.settled[t], 1);
        }
        std::vector<AdviceOutcome> outcomes;
        for (std::size_t b = 0; b < count; ++b) {
            const auto ans = reader.answers(first[b], plans[b].queries.size());
            for (const auto& js : plans[b].lambdas)
                for (Symbol j : js) state.put(j, fd);
            put_answers(state, ans, params.erasure_alphabet);
            outcomes.push_back(ldc.finish_advice(plans[b], adv, adv_values, ans));
        }
        ledger.checkpoint(state.bits());

        const double c = static_cast<double>(c_half) / 2.0;
        res.per_copy_c.push_back(c);
        const bool accept = c < params.threshold() &&
                            std::none_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.flagged; });
        res.per_copy_accepted.push_back(accept);
        if (!accept) continue;
        for (std::size_t b = 0; b < count; ++b) {
            res.tape.write(next + b, outcomes[b].bit);
            res.write_copy.push_back(res.copies_used - 1);
        }
        next += count;
    }
    res.completed = next >= params.n;
    res.peak_bits = ledger.peak_bits();
    res.budget_exceeded = ledger.budget_exceeded();
    return res;
}

std::vector<Symbol> repeat_decode(const BinaryLdc& ldc, const RepeatParams& params, SymbolStream& stream, Rng& rng) {
    const auto res = dec_repeat(ldc, params, stream, rng);
    if (!res.completed)
        throw StreamExhausted("copies ran out after " + std::to_string(res.tape.size()) + " of " +
                              std::to_string(params.n) + " bits");
    std::vector<Symbol> x;
    for (const auto& [i, b] : res.tape.entries()) x.push_back(b);
    return x;
}

ErrCountProbe errcount_probe(const RepeatParams& params, const RepeatResult& result, std::span<const Symbol> clean_copy,
                             std::span<const double> errors_per_copy) {
    ErrCountProbe probe;
    const double N = static_cast<double>(clean_copy.size());
    const double k = static_cast<double>(params.copies);
    double errors = 0;
    for (std::size_t l = 1; l <= result.trace.size(); ++l) {
        if (l - 1 < errors_per_copy.size()) errors += errors_per_copy[l - 1];
        const auto& snap = result.trace[l - 1];
        const double level = params.settle_level() * static_cast<double>(snap.den);
        const double bound = 0.5 * (1.0 - params.eps) * (static_cast<double>(l) - k / 2.0) * N;
        for (std::size_t t = 0; t < snap.num.size(); ++t) {
            const Symbol b = clean_copy[result.positions[t]];
            if (static_cast<double>(snap.num[t][b]) > level) continue;
            ++probe.checks;
            if (errors < bound) ++probe.violations;
        }
    }
    return probe;
}

}  // namespace streamcode
