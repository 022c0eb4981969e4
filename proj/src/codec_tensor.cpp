#include "streamcode/codec_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "streamcode/errors.hpp"

namespace streamcode {

namespace {

std::size_t ipow(std::size_t b, unsigned e) {
    std::size_t p = 1;
    for (unsigned i = 0; i < e; ++i) p *= b;
    return p;
}

// Encode along one axis of a row-major array with the given dimensions.
Word apply_axis(const LinearCode& code, std::span<const Symbol> data, std::vector<std::size_t>& dims, unsigned axis) {
    const Field& f = *code.field();
    const auto& g = code.generator();
    std::size_t outer = 1, inner = 1;
    for (unsigned j = 0; j < axis; ++j) outer *= dims[j];
    for (std::size_t j = axis + 1; j < dims.size(); ++j) inner *= dims[j];
    const std::size_t r = dims[axis], R = g.rows;
    Word out(outer * R * inner, 0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t I = 0; I < R; ++I)
            for (std::size_t i = 0; i < r; ++i) {
                const Symbol c = g.at(I, i);
                if (c == 0) continue;
                const Symbol* src = data.data() + (o * r + i) * inner;
                Symbol* dst = out.data() + (o * R + I) * inner;
                for (std::size_t u = 0; u < inner; ++u) dst[u] ^= f.mul(c, src[u]);
            }
    dims[axis] = R;
    return out;
}

}  // namespace

Word tensor_encode_axes(const LinearCode& code, unsigned d, std::span<const Symbol> x,
                        std::span<const unsigned> axis_order) {
    if (x.size() != ipow(code.msg_len(), d)) throw LengthMismatch("tensor message must have r^d symbols");
    if (axis_order.size() != d) throw InvalidArgument("axis order must list every axis once");
    std::vector<bool> seen(d, false);
    for (unsigned a : axis_order) {
        if (a >= d || seen[a]) throw InvalidArgument("axis order must list every axis once");
        seen[a] = true;
    }
    std::vector<std::size_t> dims(d, code.msg_len());
    Word cur(x.begin(), x.end());
    for (unsigned a : axis_order) cur = apply_axis(code, cur, dims, a);
    return cur;
}

Word tensor_encode(const LinearCode& code, unsigned d, std::span<const Symbol> x) {
    std::vector<unsigned> order(d);
    for (unsigned j = 0; j < d; ++j) order[j] = j;
    return tensor_encode_axes(code, d, x, order);
}

LinearCode tensor_code(const LinearCode& code, unsigned d) {
    const Field& f = *code.field();
    const std::size_t r = code.msg_len(), R = code.code_len();
    const std::size_t rows = ipow(R, d), cols = ipow(r, d);
    linalg::Matrix g(rows, cols);
    for (std::size_t row = 0; row < rows; ++row)
        for (std::size_t col = 0; col < cols; ++col) {
            Symbol v = 1;
            std::size_t a = row, b = col;
            for (unsigned j = 0; j < d && v; ++j) {
                v = f.mul(v, code.generator().at(a % R, b % r));
                a /= R;
                b /= r;
            }
            g.at(row, col) = v;
        }
    std::optional<std::vector<std::size_t>> sys;
    if (code.systematic()) {
        const auto& s = *code.systematic();
        sys.emplace(cols);
        for (std::size_t col = 0; col < cols; ++col) {
            std::size_t b = col, pos = 0, scale = 1;
            for (unsigned j = 0; j < d; ++j) {
                pos += s[b % r] * scale;
                scale *= R;
                b /= r;
            }
            (*sys)[col] = pos;
        }
    }
    return LinearCode(code.field(), std::move(g), std::move(sys), code.kind() + "^" + std::to_string(d));
}

// ------------------------------------------------------------------ params

std::size_t TensorParams::n() const { return ipow(r, d); }

TensorParams TensorParams::toy() {
    TensorParams p;
    p.r = 4;
    p.d = 2;
    p.eps = 0.1;
    p.instances = default_instances(p.n());
    p.inner_copies = 4;
    p.ldc.symbol_degree = 4;
    p.ldc.ext = 1;
    p.ldc.degree = 3;
    p.ldc.variables = 1;
    p.ldc.r = 4;
    p.ldc.eps = 0.1;
    p.ldc.t = 4;
    p.ldc.Q = 60;
    return p;
}

unsigned TensorParams::default_instances(std::size_t n) {
    const auto lg = static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
    return std::min(49U, std::max(9U, lg * lg));
}

void TensorParams::validate() const {
    auto fail = [](const std::string& why) { throw ProfileError("tensor codec: " + why); };
    if (r == 0) fail("r must be positive");
    if (d == 0) fail("d must be >= 1");
    if (ldc.r != r) fail("LDC message length must equal r");
    if (ldc.ext != 1) fail("the LDC must be over K itself (ext = 1)");
    if (!(eps > 0.0 && eps < 0.5)) fail("eps must lie in (0, 1/2)");
    if (instances == 0) fail("instances must be >= 1");
    if (inner_copies == 0) fail("inner copies must be >= 1");
    if (cap_override && *cap_override == 0) fail("cap must be positive");
    if (static_cast<double>(ipow(ldc.points(), d)) * ((1U << ldc.symbol_degree) - 1) * inner_copies > 1e8)
        fail("codeword too long");
    ldc.validate();
}

std::string TensorParams::describe() const {
    std::ostringstream out;
    out << "tensor n=" << n() << " r=" << r << " d=" << d << " eps=" << eps << " instances=" << instances
        << " inner=simplex(" << ldc.symbol_degree << ")x" << inner_copies;
    if (cap_override) out << " cap=" << *cap_override;
    out << " | " << ldc.describe();
    return out.str();
}

TensorRegime tensor_regime(std::size_t n, double eps, double s) {
    TensorRegime t;
    t.r = std::pow(s, 0.2);
    t.d = std::log(static_cast<double>(n)) / std::log(t.r);
    t.eps_prime = eps / (10.0 * t.d);
    return t;
}

// ------------------------------------------------------------------- codec

TensorCodec::TensorCodec(TensorParams params)
    : params_((params.validate(), std::move(params))),
      ldc_(params_.ldc),
      code_(ldc_.as_linear_code()),
      inner_(replicate(simplex_code(params_.ldc.symbol_degree), params_.inner_copies)),
      inner_distance_(std::size_t{1} << (params_.ldc.symbol_degree - 1)) {
    inner_distance_ *= params_.inner_copies;
    const Embedding emb(Field::standard(1), ldc_.symbol_field());
    const std::size_t K = ldc_.symbol_field()->size();
    inner_words_.reserve(K * inner_len());
    for (Symbol s = 0; s < K; ++s) {
        const auto cw = inner_.encode(emb.coords(s));
        inner_words_.insert(inner_words_.end(), cw.begin(), cw.end());
    }
}

std::size_t TensorCodec::blocks() const { return ipow(R(), params_.d); }

std::size_t TensorCodec::block_index(std::span<const std::size_t> tuple) const {
    if (tuple.size() != params_.d) throw LengthMismatch("tuple must have d entries");
    std::size_t idx = 0;
    for (std::size_t I : tuple) {
        if (I >= R()) throw InvalidArgument("tuple entry out of range");
        idx = idx * R() + I;
    }
    return idx;
}

Word TensorCodec::encode_symbols(std::span<const Symbol> x) const {
    if (x.size() != params_.n()) throw LengthMismatch("message must have n bits");
    for (Symbol b : x)
        if (b > 1) throw InvalidArgument("message entries must be bits");
    return tensor_encode(code_, params_.d, x);
}

Word TensorCodec::encode(std::span<const Symbol> x) const {
    const auto z = encode_symbols(x);
    Word out;
    out.reserve(length());
    for (Symbol s : z) {
        const auto cw = inner_codeword(s);
        out.insert(out.end(), cw.begin(), cw.end());
    }
    return out;
}

BaseOutcome TensorCodec::decode_base(std::span<const Symbol> bits, Rng& coin) const {
    if (bits.size() != inner_len()) throw LengthMismatch("base block has the wrong length");
    const std::size_t K = ldc_.symbol_field()->size();
    BaseOutcome out;
    std::size_t best = SIZE_MAX;
    Symbol arg = 0;
    for (Symbol s = 0; s < K; ++s) {
        const std::size_t hd = half_distance(bits, inner_codeword(s));
        if (hd < best) {
            best = hd;
            arg = s;
        }
    }
    // 2 dist < d_min; in half units that is hd < d_min.
    if (best >= inner_distance_) return out;
    out.decoded = true;
    out.half_distance = best;
    const std::size_t L = inner_len();
    if (coin.bernoulli(L - std::min(best, L), L)) out.sigma = arg;
    return out;
}

namespace {

struct Request {
    std::size_t inst;
    std::size_t prefix;  // index into ell of the fixed leading coordinates
};

struct Level {
    std::vector<LargePlan> lists;                     // by message coordinate
    std::vector<std::vector<std::size_t>> by_index;   // I -> coordinates whose list queries I
};

class Recursion {
public:
    Recursion(const TensorCodec& codec, SymbolStream& stream, std::span<const Symbol> ell,
              std::vector<std::vector<Level>>& levels, std::vector<Rng>& coins, Rng& base_coin,
              TensorDiagnostics& diag, std::size_t cap)
        : c_(codec), s_(stream), ell_(ell), levels_(levels), coins_(coins), base_coin_(base_coin), diag_(diag),
          cap_(cap) {}

    std::vector<std::optional<Symbol>> run(unsigned a, const std::vector<Request>& reqs) {
        const Field& f = *c_.field();
        const std::size_t depth = c_.params().d - a;
        note_live(depth, reqs);
        std::vector<std::optional<Symbol>> out(reqs.size());
        if (a == 0) {
            block_.resize(c_.inner_len());
            for (auto& b : block_) b = s_.read_next();
            ++diag_.base_reads;
            const auto base = c_.decode_base(block_, base_coin_);
            for (std::size_t k = 0; k < reqs.size(); ++k)
                if (base.sigma) out[k] = f.mul(ell_[reqs[k].prefix], *base.sigma);
            return out;
        }

        const std::size_t R = c_.R(), r = c_.params().r;
        const std::size_t seg = c_.inner_len() * ipow(R, a - 1);
        // answers[k][i][I]: value of sub-block I for coordinate i of request k.
        std::vector<std::vector<std::vector<Symbol>>> answers(
            reqs.size(), std::vector<std::vector<Symbol>>(r, std::vector<Symbol>(R, kErasure)));
        std::vector<Request> sub;
        std::vector<std::pair<std::size_t, std::size_t>> route;
        for (std::size_t I = 0; I < R; ++I) {
            sub.clear();
            route.clear();
            for (std::size_t k = 0; k < reqs.size(); ++k)
                for (std::size_t i : levels_[reqs[k].inst][a - 1].by_index[I]) {
                    sub.push_back({reqs[k].inst, reqs[k].prefix * r + i});
                    route.emplace_back(k, i);
                }
            if (sub.empty()) {
                s_.skip(seg);
                continue;
            }
            const auto vals = run(a - 1, sub);
            for (std::size_t u = 0; u < vals.size(); ++u)
                answers[route[u].first][route[u].second][I] = vals[u] ? *vals[u] : kErasure;
        }

        std::vector<Symbol> ans;
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            const auto& lists = levels_[reqs[k].inst][a - 1].lists;
            Symbol sum = 0;
            std::uint64_t pmin = UINT64_MAX, den = 1;
            for (std::size_t i = 0; i < r; ++i) {
                const auto& plan = lists[i];
                ans.resize(plan.queries.size());
                for (std::size_t j = 0; j < ans.size(); ++j) ans[j] = answers[k][i][plan.queries[j]];
                const auto conf = c_.ldc().finish_smooth(plan, ans);
                den = conf.den;
                const std::uint64_t p = conf.symbol ? conf.num_symbol : 0;
                pmin = std::min(pmin, p);
                if (conf.symbol) sum = f.add(sum, *conf.symbol);
            }
            if (coins_[reqs[k].inst].bernoulli(pmin, den)) out[k] = sum;
        }
        return out;
    }

private:
    void note_live(std::size_t depth, const std::vector<Request>& reqs) {
        std::vector<std::size_t> per(coins_.size(), 0);
        for (const auto& q : reqs) ++per[q.inst];
        const std::size_t live = *std::max_element(per.begin(), per.end());
        auto& m = diag_.max_live[depth];
        m = std::max(m, live);
        if (static_cast<double>(live) > std::pow(static_cast<double>(cap_), static_cast<double>(depth)))
            diag_.live_violation = true;
    }

    const TensorCodec& c_;
    SymbolStream& s_;
    std::span<const Symbol> ell_;
    std::vector<std::vector<Level>>& levels_;
    std::vector<Rng>& coins_;
    Rng& base_coin_;
    TensorDiagnostics& diag_;
    std::size_t cap_;
    std::vector<Symbol> block_;
};

}  // namespace

std::vector<std::optional<Symbol>> TensorCodec::recurse_instances(SymbolStream& stream, std::span<const Symbol> ell,
                                                                  Rng& rng, TensorDiagnostics* diag) const {
    if (ell.size() != params_.n()) throw LengthMismatch("ell must have n entries");
    if (stream.remaining() != length()) throw LengthMismatch("stream length differs from the codeword length");
    TensorDiagnostics local;
    TensorDiagnostics& dg = diag ? *diag : local;
    dg = TensorDiagnostics{};
    dg.max_live.assign(params_.d + 1, 0);

    const std::size_t inst = params_.instances;
    std::vector<std::vector<Level>> levels(inst);
    std::vector<Rng> coins;
    coins.reserve(inst);
    for (std::size_t u = 0; u < inst; ++u) {
        Rng ir(rng.fork());
        for (unsigned a = 1; a <= params_.d; ++a) {
            auto ql = ldc_.gen_qlists(ir, params_.cap_override);
            dg.cap = ql.cap;
            dg.resamples += ql.resamples;
            Level lv;
            lv.by_index.assign(R(), {});
            for (std::size_t i = 0; i < ql.lists.size(); ++i) {
                auto q = ql.lists[i].queries;
                std::sort(q.begin(), q.end());
                q.erase(std::unique(q.begin(), q.end()), q.end());
                for (std::size_t I : q) lv.by_index[I].push_back(i);
            }
            lv.lists = std::move(ql.lists);
            levels[u].push_back(std::move(lv));
        }
        coins.emplace_back(ir.fork());
    }
    Rng base_coin(rng.fork());

    std::vector<Request> top;
    for (std::size_t u = 0; u < inst; ++u) top.push_back({u, 0});
    Recursion rec(*this, stream, ell, levels, coins, base_coin, dg, dg.cap);
    auto vals = rec.run(params_.d, top);
    dg.instance_values = vals;
    return vals;
}

Symbol TensorCodec::linear_dec(SymbolStream& stream, std::span<const Symbol> ell_bits, Rng& rng,
                               TensorDiagnostics* diag) const {
    for (Symbol b : ell_bits)
        if (b > 1) throw InvalidArgument("ell entries must be bits");
    // 0 and 1 lift to themselves in every GF(2^k).
    const auto vals = recurse_instances(stream, ell_bits, rng, diag);
    std::size_t ones = 0;
    for (const auto& v : vals) ones += v ? (*v & 1U) : rng.below(2);
    const std::size_t zeros = vals.size() - ones;
    if (ones != zeros) return ones > zeros ? 1 : 0;
    return static_cast<Symbol>(rng.below(2));
}

}  // namespace streamcode
