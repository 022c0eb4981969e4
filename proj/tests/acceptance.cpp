// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "streamcode/channel.hpp"
#include "streamcode/codec_repeat.hpp"
#include "streamcode/codec_tensor.hpp"
#include "streamcode/concat_rs.hpp"
#include "streamcode/errors.hpp"
#include "streamcode/experiment.hpp"
#include "streamcode/ldc_binary.hpp"
#include "streamcode/ldc_large.hpp"
#include "streamcode/oracle.hpp"
#include "streamcode/profile.hpp"

using namespace streamcode;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string failures;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures += " [failed: " + what + "]";
        }
    }
};

std::vector<Symbol> random_bits(std::size_t n, Rng& rng) {
    std::vector<Symbol> x(n);
    for (auto& b : x) b = static_cast<Symbol>(rng.below(2));
    return x;
}

Word plant_flips(Word w, std::size_t flips, Rng& rng) {
    std::vector<std::size_t> idx(w.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < flips; ++i) {
        std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        w[idx[i]] ^= 1;
    }
    return w;
}

double rate(const nlohmann::json& rep) { return rep["aggregates"]["success_rate"].get<double>(); }

// Reports shared between criteria.
std::vector<nlohmann::json> repeat_reports;
std::vector<nlohmann::json> tensor_reports;

// ---------------------------------------------------------------- 1

void field_poly(Outcome& o) {
    std::size_t cases = 0;
    for (unsigned k = 1; k <= 12; ++k) {
        const auto F = Field::standard(k);
        const Field& f = *F;
        Rng rng(k);
        bool ok = true;
        for (int t = 0; t < 1000; ++t) {
            const Symbol a = static_cast<Symbol>(rng.below(f.size())), b = static_cast<Symbol>(rng.below(f.size())),
                         c = static_cast<Symbol>(rng.below(f.size()));
            ok &= f.mul(a, b) == f.mul(b, a);
            ok &= f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
            ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
            ok &= f.add(f.add(a, b), b) == a;
            ok &= f.mul(a, 1) == a && f.mul(a, 0) == 0;
            if (a != 0) ok &= f.mul(a, f.inv(a)) == 1;
            ok &= f.mul(a, b) == slow_mul(a, b, k, f.modulus());
            ++cases;
        }
        // interpolation roundtrips
        const std::size_t maxdeg = std::min<std::size_t>(f.size(), 8);
        for (int t = 0; t < 1000; ++t) {
            const std::size_t len = 1 + rng.below(maxdeg);
            std::vector<Symbol> coeffs(len);
            for (auto& v : coeffs) v = static_cast<Symbol>(rng.below(f.size()));
            std::vector<Symbol> xs;
            std::set<Symbol> seen;
            while (xs.size() < len) {
                const Symbol x = static_cast<Symbol>(rng.below(f.size()));
                if (seen.insert(x).second) xs.push_back(x);
            }
            std::vector<Symbol> ys;
            for (Symbol x : xs) ys.push_back(poly::eval(f, coeffs, x));
            auto back = poly::interpolate(f, xs, ys);
            auto want = coeffs;
            poly::trim(want);
            poly::trim(back);
            ok &= back == want;
            ++cases;
        }
        o.require(ok, "GF(2^" + std::to_string(k) + ")");
    }
    o.detail << cases << " cases over GF(2^1..2^12)";
}

// ---------------------------------------------------------------- 2

void oracle_distances(Outcome& o) {
    const auto rep = verify_code_tables();
    std::set<std::string> names;
    for (const auto& c : rep["claims"]) {
        if (c["skipped"].get<bool>()) continue;
        names.insert(c["name"].get<std::string>());
        o.require(c["pass"].get<bool>(), c["name"].get<std::string>());
    }
    for (const char* need : {"rs-gf16-16-3", "rm-gf8-m2-d1", "binary-ldc-n12", "large-ldc-gf16-m2-d1"})
        o.require(names.count(need) == 1, std::string("claim ") + need + " checked");
    o.detail << rep["passed"] << " claims checked, " << rep["failed"] << " failed";
}

// ---------------------------------------------------------------- 3

void decoder_agreement(Outcome& o) {
    // full sweep of RM(1, 4) over GF(2): [16, 5, 8], 2^16 words
    const auto code = rm_code(Field::standard(1), 4, 1);
    const UniqueDecoder dec(code);
    std::size_t inside = 0, mismatches = 0;
    Word w(16);
    for (std::uint32_t v = 0; v < (1U << 16); ++v) {
        for (int i = 0; i < 16; ++i) w[i] = (v >> i) & 1U;
        const auto near = nearest_codeword_bruteforce(code, w);
        const auto got = dec.decode(w);
        if (near.half_distance < dec.min_distance()) {
            ++inside;
            if (!got || *got != near.message) ++mismatches;
        } else if (got) {
            ++mismatches;
        }
    }
    o.require(mismatches == 0, "unique decode vs brute force");

    // list decoding at radius (1 - eps) / 2 against enumeration
    std::vector<Symbol> pts(15);
    for (std::size_t i = 0; i < 15; ++i) pts[i] = static_cast<Symbol>(i + 1);
    const ConcatRs c(Field::standard(4), pts, 3, simplex_code(4));
    const auto lin = c.as_linear_code();
    Rng rng(33);
    const double eps = 0.1;
    std::size_t complete = 0;
    const int words = 50;
    for (int t = 0; t < words; ++t) {
        std::vector<Symbol> h(3);
        for (auto& v : h) v = static_cast<Symbol>(rng.below(16));
        Word cw = c.encode(h);
        for (auto& b : cw)
            if (rng.uniform() < 0.4) b ^= 1;
        const auto list = list_decode_concat(c, cw, eps);
        std::vector<std::vector<Symbol>> expect, got;
        for (Symbol a = 0; a < 16; ++a)
            for (Symbol b = 0; b < 16; ++b)
                for (Symbol d = 0; d < 16; ++d) {
                    const std::vector<Symbol> m{a, b, d};
                    if (half_distance(lin.encode(c.flatten(m)), cw) <= static_cast<std::size_t>((1 - eps) * c.length()))
                        expect.push_back(m);
                }
        for (const auto& e : list) got.push_back(e.coeffs);
        std::sort(got.begin(), got.end());
        std::sort(expect.begin(), expect.end());
        complete += got == expect;
    }
    o.require(complete == static_cast<std::size_t>(words), "list decoding complete");
    o.detail << "RM(1,4) sweep: " << inside << " words inside the radius, " << mismatches << " mismatches; list decode "
             << complete << "/" << words << " complete";
}

// ---------------------------------------------------------------- 4, 6, 7 (binary LDC)

BinaryLdcParams binary_toy() {
    BinaryLdcParams p;
    p.n = 12;
    p.eps = 0.1;
    p.Q = 16384;
    p.field_degree = 5;
    p.degree = 1;
    p.variables = 2;
    p.t_smooth = 8;
    p.k_adv = 2;
    p.advice_iterations = 16;
    return p;
}

const BinaryLdc& binary_ldc() {
    static const BinaryLdc ldc(binary_toy());
    return ldc;
}

std::size_t budget_breaches = 0;  // criterion 7: plans above Q or adaptive reads
std::size_t plans_checked = 0;

void check_plan(const WordOracle& a, const WordOracle& b, std::size_t Q) {
    ++plans_checked;
    const std::set<std::size_t> distinct(a.log().begin(), a.log().end());
    if (a.log() != b.log() || distinct.size() > Q) ++budget_breaches;
}

void binary_smooth(Outcome& o) {
    const auto& ldc = binary_ldc();
    const std::size_t N = ldc.length();
    const double eps = ldc.params().eps;
    for (double delta : {0.0, 0.1, 0.2}) {
        Rng rng(400 + static_cast<std::uint64_t>(delta * 10));
        int bad = 0;
        const int trials = 500;
        for (int t = 0; t < trials; ++t) {
            const auto x = random_bits(12, rng);
            const auto cw = ldc.encode(x);
            const auto w = plant_flips(cw, static_cast<std::size_t>(delta * static_cast<double>(N)), rng);
            const std::size_t i = rng.below(12);
            WordOracle wa(w, true), wb(cw, true);
            Rng r1(rng.next()), r2 = r1;
            const auto c = ldc.smooth_decode(wa, i, r1);
            ldc.smooth_decode(wb, i, r2);
            check_plan(wa, wb, ldc.params().Q);
            if (!(c.p(x[i]) > 1 - 2 * delta - eps)) ++bad;
        }
        o.require(bad * 20 <= trials, "delta " + std::to_string(delta));
        o.detail << (delta > 0 ? "; " : "") << "delta=" << delta << ": " << bad << "/" << trials << " violations";
    }
}

std::vector<Symbol> advice_values(const Word& cw, const AdvicePositions& adv) {
    std::vector<Symbol> v;
    for (std::size_t p : adv.positions) v.push_back(cw[p]);
    return v;
}

void advice(Outcome& o) {
    const auto& ldc = binary_ldc();
    Rng rng(600);
    int ok = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto x = random_bits(12, rng);
        const auto cw = ldc.encode(x);
        const auto w = plant_flips(cw, static_cast<std::size_t>(0.3 * static_cast<double>(cw.size())), rng);
        const auto adv = ldc.sample_advice(rng);
        const std::size_t i = rng.below(12);
        WordOracle wa(w, true), wb(cw, true);
        Rng r1(rng.next()), r2 = r1;
        const auto out = ldc.decode_with_advice_detail(wa, i, adv, advice_values(cw, adv), r1);
        ldc.decode_with_advice_detail(wb, i, adv, advice_values(cw, adv), r2);
        check_plan(wa, wb, ldc.params().Q);
        ok += !out.flagged && out.bit == x[i];
    }
    o.require(ok * 100 >= trials * 95, "recovery rate");

    // falsified advice that is no longer an inner codeword is always detectable
    int flagged = 0;
    const int falsified = 100;
    for (int t = 0; t < falsified; ++t) {
        const auto x = random_bits(12, rng);
        const auto cw = ldc.encode(x);
        const auto adv = ldc.sample_advice(rng);
        auto vals = advice_values(cw, adv);
        vals[rng.below(vals.size())] ^= 1;
        flagged += ldc.decode_with_advice_detail(WordOracle(cw), rng.below(12), adv, vals, rng).flagged;
    }
    o.require(flagged == falsified, "falsified advice flagged");
    o.detail << "delta=0.3: " << ok << "/" << trials << " recovered; falsified advice flagged " << flagged << "/"
             << falsified;
}

// ---------------------------------------------------------------- 5

LargeLdcParams large_params(unsigned k, unsigned d, unsigned m, std::size_t r, unsigned t, std::size_t Q) {
    LargeLdcParams p;
    p.symbol_degree = k;
    p.degree = d;
    p.variables = m;
    p.r = r;
    p.t = t;
    p.Q = Q;
    p.eps = 0.1;
    return p;
}

void large_smooth(Outcome& o) {
    const LargeLdc ldc(large_params(6, 3, 1, 4, 4, 256));
    const std::size_t N = ldc.length();
    const double eps = ldc.params().eps;
    Rng rng(500);
    // 0.3 of 64 symbols is 19.2; 10 flips + 18 erasures weigh 19
    const std::size_t flips = 10, erasures = 18;
    const double delta = (static_cast<double>(flips) + static_cast<double>(erasures) / 2) / static_cast<double>(N);
    int bad = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        std::vector<Symbol> x(4);
        for (auto& s : x) s = static_cast<Symbol>(rng.below(64));
        const auto cw = ldc.encode(x);
        Word w = cw;
        std::vector<std::size_t> idx(N);
        for (std::size_t i = 0; i < N; ++i) idx[i] = i;
        for (std::size_t i = 0; i < flips + erasures; ++i) {
            std::swap(idx[i], idx[i + rng.below(N - i)]);
            if (i < flips)
                w[idx[i]] ^= static_cast<Symbol>(1 + rng.below(63));
            else
                w[idx[i]] = kErasure;
        }
        const std::size_t i = rng.below(4);
        WordOracle wa(w, true), wb(cw, true);
        Rng r1(rng.next()), r2 = r1;
        const auto conf = ldc.smooth_decode(wa, i, r1);
        ldc.smooth_decode(wb, i, r2);
        check_plan(wa, wb, ldc.params().Q);
        if (!(conf.p(x[i]) + 0.5 * conf.p_bot() > 1.0 - delta - eps)) ++bad;
    }
    o.require(bad * 20 <= trials, "violation rate");
    o.detail << "delta=" << delta << " (" << flips << " flips, " << erasures << " erasures of " << N << "): " << bad
             << "/" << trials << " violations";
}

// ---------------------------------------------------------------- 7

void query_plans(Outcome& o) {
    o.require(plans_checked == 2200, "plans checked in 4-6");
    o.require(budget_breaches == 0, "non-adaptive and within Q");
    o.detail << plans_checked << " plans from criteria 4-6, " << budget_breaches << " adaptive or over budget";
    for (unsigned t : {4U, 8U}) {
        const LargeLdc ldc(large_params(4, 1, 2, 3, t, 1024));
        Rng rng(700 + t);
        const auto rep = query_smoothness_check(ldc, ldc.message_position(0), 10000, rng);
        o.require(rep.max_frequency <= rep.bound + rep.slack, "smoothness t=" + std::to_string(t));
        o.detail << "; t=" << t << " max " << rep.max_frequency << " <= " << rep.bound << " + " << rep.slack;
    }
}

// ---------------------------------------------------------------- 8

std::size_t max_overlap(const QueryLists& ql) {
    std::map<std::size_t, std::size_t> count;
    for (const auto& l : ql.lists) {
        std::set<std::size_t> d(l.queries.begin(), l.queries.end());
        for (auto I : d) ++count[I];
    }
    std::size_t m = 0;
    for (const auto& [I, c] : count) m = std::max(m, c);
    return m;
}

void qlists(Outcome& o) {
    // every profile's LDC plus a sparse instance where the cap can bind
    std::vector<std::pair<std::string, LargeLdcParams>> inst{{"tensor-toy", builtin_profile("tensor-toy").tensor.ldc},
                                                             {"gf16-m3", large_params(4, 3, 3, 16, 1, 64)}};
    std::size_t breaches = 0, generated = 0;
    for (const auto& [name, p] : inst) {
        const LargeLdc ldc(p);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            const auto ql = ldc.gen_qlists(rng);
            ++generated;
            if (ql.cap != overlap_cap(p.r, p.Q, ldc.length()) || max_overlap(ql) > ql.cap) ++breaches;
        }
    }
    o.require(breaches == 0, "overlap cap");
    const LargeLdc tight(large_params(4, 3, 3, 16, 1, 64));
    int ok = 0;
    std::size_t resamples = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(10000 + seed);
        try {
            const auto ql = tight.gen_qlists(rng, 2);
            if (max_overlap(ql) > 2) ++breaches;
            resamples += ql.resamples;
            ++ok;
        } catch (const ResampleExhausted&) {
        }
    }
    o.require(breaches == 0, "overlap cap under cap 2");
    o.require(ok >= 990, "resampling terminates");
    o.detail << generated << " default-cap generations, " << breaches << " over cap; cap 2: " << ok
             << "/1000 terminated with " << resamples << " resamples";
}

// ---------------------------------------------------------------- 9, 10, 11

nlohmann::json run(const Profile& p) { return run_experiment(p); }

void repeat_e2e(Outcome& o) {
    const auto base = builtin_profile("repeat-toy");
    const std::size_t N = BinaryLdc(base.repeat.ldc).length();
    auto uniform = run(base.with({{"trials", "200"}, {"rho", "0.05"}, {"attack", "uniform_flip"}, {"seed", "9000"}}));
    o.require(rate(uniform) >= 0.99, "uniform_flip >= 99%");
    o.detail << "uniform_flip " << uniform["aggregates"]["successes"] << "/200";

    std::size_t kill_ok = 0, kill_trials = 0;
    std::vector<nlohmann::json> kills;
    for (std::size_t copy = 0; copy < base.repeat.copies; ++copy) {
        auto rep = run(base.with({{"trials", "10"},
                                  {"rho", "0.05"},
                                  {"attack", "copy_kill"},
                                  {"copy_index", std::to_string(copy)},
                                  {"seed", std::to_string(9300 + 10 * copy)}}));
        kill_ok += rep["aggregates"]["successes"].get<std::size_t>();
        kill_trials += 10;
        kills.push_back(std::move(rep));
    }
    o.require(kill_ok * 100 >= kill_trials * 95, "copy_kill >= 95%");
    o.detail << "; copy_kill sweep " << kill_ok << "/" << kill_trials;

    auto block = run(base.with({{"trials", "128"}, {"rho", "0.05"}, {"attack", "blockzero_window"}, {"seed", "9500"}}));
    o.require(rate(block) >= 0.95, "blockzero_window >= 95%");
    o.detail << "; blockzero sweep " << block["aggregates"]["successes"] << "/128 (heuristic windows)";

    auto clean = run(base.with({{"trials", "50"}, {"rho", "0"}, {"seed", "9700"}}));
    o.require(rate(clean) == 1.0, "zero corruption 100%");
    o.detail << "; zero corruption " << clean["aggregates"]["successes"] << "/50";

    // a full-copy kill needs rho >= 1/k: N flips fit in floor(rho k N)
    auto full = run(base.with({{"trials", "10"}, {"rho", "0.1"}, {"attack", "copy_kill"}, {"seed", "9800"}}));
    o.require(full["trials"][0]["distance"].get<double>() == static_cast<double>(N), "full copy killed");
    o.require(rate(full) == 1.0, "full copy kill decodes");
    o.detail << "; full first-copy kill at rho=0.1 " << full["aggregates"]["successes"] << "/10";

    repeat_reports = {uniform, block, clean, full};
    for (auto& k : kills) repeat_reports.push_back(std::move(k));
}

void space_ledger(Outcome& o) {
    const auto budget = builtin_profile("repeat-toy").repeat.budget_bits;
    std::size_t runs = 0, over = 0, peak = 0;
    for (const auto& rep : repeat_reports)
        for (const auto& t : rep["trials"]) {
            if (!t["success"].get<bool>()) continue;
            ++runs;
            peak = std::max(peak, t["peak_bits"].get<std::size_t>());
            over += t["peak_bits"].get<std::size_t>() > budget;
        }
    o.require(runs > 0 && over == 0, "peak_bits <= budget");
    std::size_t cap_breaches = 0, tensor_runs = 0;
    for (const auto& rep : tensor_reports) {
        cap_breaches += rep["invariants"]["overlap_cap"].get<std::size_t>();
        tensor_runs += rep["aggregates"]["trials"].get<std::size_t>();
    }
    // a sparse tensor instance where cap^depth is small enough to bind
    TensorParams p;
    p.r = 3;
    p.d = 2;
    p.instances = 9;
    p.ldc.symbol_degree = 2;
    p.ldc.degree = 1;
    p.ldc.variables = 2;
    p.ldc.r = 3;
    p.ldc.t = 1;
    p.ldc.Q = 3;
    std::size_t worst = 0, exhausted = 0;
    for (std::size_t cap : {1, 2, 3}) {
        p.cap_override = cap;
        const TensorCodec codec(p);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            const auto x = random_bits(9, rng);
            SymbolStream s(codec.encode(x));
            TensorDiagnostics diag;
            try {
                codec.recurse_instances(s, random_bits(9, rng), rng, &diag);
            } catch (const ResampleExhausted&) {
                ++exhausted;  // no qlists exist under this cap for the drawn seed
                continue;
            }
            ++tensor_runs;
            for (std::size_t j = 0; j < diag.max_live.size(); ++j) {
                std::size_t bound = 1;
                for (std::size_t u = 0; u < j; ++u) bound *= cap;
                cap_breaches += diag.max_live[j] > bound;
                if (j == 2) worst = std::max(worst, diag.max_live[j]);
            }
        }
    }
    o.require(cap_breaches == 0, "live counter <= cap^depth");
    o.detail << runs << " accepted repeat runs, peak " << peak << " <= " << budget << " bits; " << tensor_runs
             << " tensor runs, " << cap_breaches << " cap breaches, depth-2 max live " << worst << " under cap 3; "
             << exhausted << " cap-1 draws had no valid qlists";
}

void errcount(Outcome& o) {
    const auto p = builtin_profile("repeat-toy").repeat;
    const BinaryLdc ldc(p.ldc);
    const std::size_t N = ldc.length();
    int held = 0;
    std::size_t checks = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(11000 + static_cast<std::uint64_t>(trial));
        const auto x = random_bits(p.n, rng);
        const auto y = ldc.encode(x);
        auto w = enc_repeat(ldc, p, x);
        std::vector<double> errs;
        // per-copy error level varies over trials: 0.1 .. 0.3
        const double level = 0.1 + 0.2 * static_cast<double>(trial % 5) / 4.0;
        for (std::size_t c = 0; c < p.copies; ++c) {
            const auto e = static_cast<std::size_t>(level * static_cast<double>(N));
            Word copy(w.begin() + static_cast<std::ptrdiff_t>(c * N), w.begin() + static_cast<std::ptrdiff_t>((c + 1) * N));
            copy = plant_flips(std::move(copy), e, rng);
            std::copy(copy.begin(), copy.end(), w.begin() + static_cast<std::ptrdiff_t>(c * N));
            errs.push_back(static_cast<double>(e));
        }
        SymbolStream s(std::move(w));
        const auto res = dec_repeat(ldc, p, s, rng, true);
        const auto probe = errcount_probe(p, res, y, errs);
        checks += probe.checks;
        held += probe.violations == 0;
    }
    o.require(held * 100 >= trials * 95, "claim holds in >= 95%");
    o.detail << "bound held in " << held << "/" << trials << " trials (" << checks << " unsettled tracker-copy checks)";
}

// ---------------------------------------------------------------- 12

void tensor_identities(Outcome& o) {
    const TensorCodec codec(builtin_profile("tensor-toy").tensor);
    const auto& code = codec.code();
    const auto& f = *codec.field();
    Rng rng(1200);
    int comm = 0, lin = 0;
    const std::vector<unsigned> fwd{0, 1}, rev{1, 0};
    for (int t = 0; t < 100; ++t) {
        std::vector<Symbol> x(16), y(16), z(16);
        for (auto& v : x) v = static_cast<Symbol>(rng.below(f.size()));
        for (auto& v : y) v = static_cast<Symbol>(rng.below(f.size()));
        const Symbol a = static_cast<Symbol>(rng.below(f.size()));
        for (std::size_t i = 0; i < 16; ++i) z[i] = f.add(f.mul(a, x[i]), y[i]);
        const auto ex = tensor_encode_axes(code, 2, x, fwd);
        comm += ex == tensor_encode_axes(code, 2, x, rev);
        const auto ey = tensor_encode(code, 2, y), ez = tensor_encode(code, 2, z);
        bool ok = true;
        for (std::size_t i = 0; i < ez.size(); ++i) ok &= ez[i] == f.add(f.mul(a, ex[i]), ey[i]);
        // bit-level encoder over GF(2)
        const auto bx = random_bits(16, rng), by = random_bits(16, rng);
        std::vector<Symbol> bs(16);
        for (std::size_t i = 0; i < 16; ++i) bs[i] = bx[i] ^ by[i];
        const auto cx = codec.encode(bx), cy = codec.encode(by), cs = codec.encode(bs);
        for (std::size_t i = 0; i < cs.size(); ++i) ok &= cs[i] == (cx[i] ^ cy[i]);
        lin += ok;
    }
    o.require(comm == 100, "axis commutation");
    o.require(lin == 100, "linearity");
    std::vector<Symbol> pts{0, 1, 2, 3};
    const auto rs = rs_code(Field::standard(2), pts, 2);
    const auto d1 = min_distance_bruteforce(rs), d2 = min_distance_bruteforce(tensor_code(rs, 2));
    o.require(d2 == d1 * d1, "distance product");
    o.detail << "commutation " << comm << "/100, linearity " << lin << "/100, RS[4,2] distance " << d1
             << ", tensor square " << d2;
}

// ---------------------------------------------------------------- 13

void tensor_e2e(Outcome& o) {
    const auto base = builtin_profile("tensor-toy");
    auto clean = run(base.with({{"trials", "300"}, {"rho", "0"}, {"seed", "13000"}}));
    auto noisy = run(base.with({{"trials", "300"}, {"rho", "0.05"}, {"seed", "13500"}}));
    o.require(rate(clean) >= 0.99, "zero corruption >= 99%");
    o.require(rate(noisy) >= 0.95, "rho 0.05 >= 95%");
    o.detail << "zero corruption " << clean["aggregates"]["successes"] << "/300, rho=0.05 "
             << noisy["aggregates"]["successes"] << "/300";

    const TensorCodec codec(base.tensor);
    Rng rng(13900);
    int kept = 0;
    const int trials = 1000;
    const auto L = codec.inner_len();
    for (int t = 0; t < trials; ++t) {
        const Symbol sigma = static_cast<Symbol>(rng.below(16));
        const auto cw = codec.inner_codeword(sigma);
        const auto w = plant_flips(Word(cw.begin(), cw.end()), L / 4, rng);
        const auto out = codec.decode_base(w, rng);
        kept += out.sigma == std::optional<Symbol>(sigma);
    }
    const double p = static_cast<double>(kept) / trials;
    o.require(std::abs(p - 0.5) <= 0.05, "base proxy within 0.05 of 1 - 2 delta");
    o.detail << "; base at delta=0.25 kept " << p << " (target 0.5)";
    tensor_reports = {clean, noisy};
}

// ---------------------------------------------------------------- 14

void channel(Outcome& o) {
    std::size_t checks = 0, breaches = 0;
    const auto rp = builtin_profile("repeat-toy").repeat;
    const BinaryLdc ldc(rp.ldc);
    const TensorCodec codec(builtin_profile("tensor-toy").tensor);
    Rng data(1400);
    const auto rw = enc_repeat(ldc, rp, random_bits(rp.n, data));
    const auto tw = codec.encode(random_bits(16, data));
    struct Target {
        const Word* word;
        std::size_t block;
        std::size_t blocks;
    };
    for (const Target& tg : {Target{&rw, ldc.length(), rp.copies}, Target{&tw, codec.inner_len(), codec.blocks()}})
        for (auto kind : {AttackKind::UniformFlip, AttackKind::Burst, AttackKind::CopyKill,
                          AttackKind::BlockzeroWindow, AttackKind::ErasureMix})
            for (double rho : {0.0, 0.01, 0.05, 0.1, 0.25})
                for (std::uint64_t seed = 0; seed < 4; ++seed) {
                    Rng rng(seed);
                    AttackStrategy st;
                    st.kind = kind;
                    st.block_len = tg.block;
                    st.copy_index = seed % tg.blocks;
                    for (std::size_t b = 0; b < tg.blocks; ++b) st.blocks.push_back((seed * 7 + b) % tg.blocks);
                    st.erasure_share = 0.25 * static_cast<double>(seed);
                    const auto c = corrupt(*tg.word, st, rho, rng);
                    ++checks;
                    const std::size_t limit = ErrorBudget(rho, tg.word->size()).limit();
                    breaches += half_distance(*tg.word, c.word) > 2 * limit;
                }
    std::size_t run_breaches = 0;
    for (const auto* reps : {&repeat_reports, &tensor_reports})
        for (const auto& rep : *reps) run_breaches += rep["invariants"]["channel_budget"].get<std::size_t>();
    o.require(breaches == 0 && run_breaches == 0, "budget exact");
    o.detail << checks << " strategy/rho/seed corruptions, " << breaches << " over budget; end-to-end runs "
             << run_breaches << " over budget";
}

// ---------------------------------------------------------------- 15

void reproducibility(Outcome& o) {
    int same = 0, total = 0;
    for (const auto& [name, settings] :
         std::vector<std::pair<std::string, std::map<std::string, std::string>>>{
             {"repeat-toy", {{"trials", "4"}, {"seed", "1500"}}},
             {"repeat-toy", {{"trials", "3"}, {"seed", "1510"}, {"attack", "blockzero_window"}}},
             {"tensor-toy", {{"trials", "20"}, {"seed", "1520"}, {"attack", "erasure_mix"}}}}) {
        const auto p = builtin_profile(name).with(settings);
        const auto first = run(p);
        const auto again = run(parse_profile(first["profile"]["text"].get<std::string>()));
        ++total;
        same += first.dump() == again.dump();
    }
    o.require(same == total, "bit-exact rerun");
    o.detail << same << "/" << total << " reports identical when rerun from the echoed profile";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0: no runtime limit
        std::function<void(Outcome&)> fn;
    };
    // 9 and 13 run before 10 and 14, which read their reports.
    const std::vector<Criterion> order{
        {1, "field and polynomial laws", 5, field_poly},
        {2, "oracle distances", 120, oracle_distances},
        {3, "decoder-oracle agreement", 300, decoder_agreement},
        {4, "binary smooth decoding", 120, binary_smooth},
        {5, "large-alphabet smooth decoding", 120, large_smooth},
        {6, "advice decoding", 120, advice},
        {7, "query plans", 0, query_plans},
        {8, "qlist overlap", 0, qlists},
        {9, "repeat codec end to end", 600, repeat_e2e},
        {11, "err-count probe", 0, errcount},
        {12, "tensor identities", 60, tensor_identities},
        {13, "tensor codec end to end", 600, tensor_e2e},
        {10, "space ledger", 0, space_ledger},
        {14, "channel discipline", 0, channel},
        {15, "reproducibility", 0, reproducibility},
    };
    std::map<int, std::string> lines;
    int failed = 0;
    for (const auto& c : order) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs > c.limit_s) o.require(false, "runtime limit");
        failed += !o.pass;
        char head[128];
        std::snprintf(head, sizeof head, "criterion %2d %-32s %s (%.1fs) ", c.id, c.name, o.pass ? "PASS" : "FAIL",
                      secs);
        lines[c.id] = head + o.detail.str() + o.failures;
        std::printf("%s\n", lines[c.id].c_str());
        std::fflush(stdout);
    }
    std::printf("\nsummary\n");
    for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
    std::printf("%d of %zu criteria failed\n", failed, order.size());
    return failed ? 1 : 0;
}
