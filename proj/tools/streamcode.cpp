// streamcode: encode, corrupt, decode and experiment driver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "streamcode/errors.hpp"
#include "streamcode/experiment.hpp"
#include "streamcode/profile.hpp"

using namespace streamcode;
using nlohmann::json;

namespace {

constexpr int kInvariantExit = 2;

struct Common {
    std::string profile;
    std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c, const std::string& fallback) {
    c.profile = fallback;
    app->add_option("--profile", c.profile, "built-in name, profile file, or report JSON")->capture_default_str();
    app->add_option("--set", c.sets, "key=value applied on top of the profile (repeatable)");
}

Profile resolve(const Common& c) {
    const Profile p = load_profile(c.profile);
    std::map<std::string, std::string> entries;
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ProfileError("--set expects key=value, got " + kv);
        entries[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return entries.empty() ? p : p.with(entries);
}

void require_codec(const Profile& p, const std::string& codec) {
    if (p.codec != codec) throw ProfileError("profile '" + p.name + "' is a " + p.codec + " profile; need " + codec);
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::vector<Symbol> read_bits(const std::string& path, std::size_t n) {
    const auto f = read_stream_file(path);
    if (f.symbols.size() != n)
        throw LengthMismatch(path + " holds " + std::to_string(f.symbols.size()) + " symbols, expected " +
                             std::to_string(n));
    for (Symbol s : f.symbols)
        if (s > 1) throw FormatError(path + " is not a bit stream");
    return f.symbols;
}

void write_word(const std::string& path, std::span<const Symbol> w, std::size_t n) {
    StreamFile f;
    f.n = n;
    f.symbols.assign(w.begin(), w.end());
    const bool erased = std::any_of(w.begin(), w.end(), [](Symbol s) { return s == kErasure; });
    f.kind = erased ? SymbolKind::FieldErased : SymbolKind::Bits;
    f.k = 1;
    write_stream_file(path, f);
}

std::vector<Symbol> read_word(const std::string& path, std::size_t length) {
    auto f = read_stream_file(path);
    if (f.symbols.size() != length)
        throw LengthMismatch(path + " holds " + std::to_string(f.symbols.size()) + " symbols, expected " +
                             std::to_string(length));
    return std::move(f.symbols);
}

std::string read_functional(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) {
        std::ifstream in(arg);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    return arg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stream-decodable codes: encoders, single-pass decoders and a budgeted channel"};
    app.require_subcommand(1);

    Common c_msg, c_renc, c_rdec, c_lenc, c_ldec, c_cor, c_run, c_ver, c_show;
    std::string in, out, report, mask, functional, expect;
    std::uint64_t seed = 1;
    std::optional<std::size_t> budget_bits, trials;
    std::optional<double> rho;
    std::optional<std::string> attack;
    std::optional<unsigned> workers;

    auto* msg = app.add_subcommand("make-message", "write a random message for a profile");
    add_common(msg, c_msg, "repeat-toy");
    msg->add_option("--seed", seed);
    msg->add_option("--out", out)->required();

    auto* renc = app.add_subcommand("repeat-encode", "encode a message with the repeated LDC");
    add_common(renc, c_renc, "repeat-toy");
    renc->add_option("--in", in)->required();
    renc->add_option("--out", out)->required();

    auto* rdec = app.add_subcommand("repeat-decode", "single-pass decode of a repeated-LDC stream");
    add_common(rdec, c_rdec, "repeat-toy");
    rdec->add_option("--budget-bits", budget_bits);
    rdec->add_option("--seed", seed);
    rdec->add_option("--in", in)->required();
    rdec->add_option("--report", report);
    rdec->add_option("--out", out, "decoded message");
    rdec->add_option("--expect", expect, "message file to compare against");

    auto* lenc = app.add_subcommand("linear-encode", "encode a message with the tensor code");
    add_common(lenc, c_lenc, "tensor-toy");
    lenc->add_option("--in", in)->required();
    lenc->add_option("--out", out)->required();

    auto* ldec = app.add_subcommand("linear-decode", "single-pass evaluation of a linear functional");
    add_common(ldec, c_ldec, "tensor-toy");
    ldec->add_option("--functional", functional, "hex file or hex digits, most significant bit first")->required();
    ldec->add_option("--seed", seed);
    ldec->add_option("--in", in)->required();
    ldec->add_option("--report", report);
    ldec->add_option("--expect", expect, "message file to compare against");

    auto* cor = app.add_subcommand("corrupt", "corrupt a codeword within the profile's budget");
    add_common(cor, c_cor, "repeat-toy");
    cor->add_option("--seed", seed);
    cor->add_option("--rho", rho);
    cor->add_option("--attack", attack);
    cor->add_option("--in", in)->required();
    cor->add_option("--out", out)->required();
    cor->add_option("--mask", mask, "write the replayable corruption mask");
    cor->add_option("--report", report);

    auto* run = app.add_subcommand("run", "encode, corrupt and decode over many seeded trials");
    add_common(run, c_run, "repeat-toy");
    run->add_option("--trials", trials);
    run->add_option("--seed", seed);
    run->add_option("--rho", rho);
    run->add_option("--attack", attack);
    run->add_option("--workers", workers);
    run->add_option("--report", report);

    auto* ver = app.add_subcommand("verify-tables", "brute-force distance checks of the claimed bounds");
    add_common(ver, c_ver, "");
    ver->add_option("--report", report);

    auto* show = app.add_subcommand("show-profile", "print a resolved profile");
    add_common(show, c_show, "repeat-toy");
    bool list = false;
    show->add_flag("--list", list, "list the built-in profiles");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*msg) {
            const auto p = resolve(c_msg);
            const std::size_t n = p.codec == "repeat" ? p.repeat.n : p.tensor.n();
            Rng rng(seed);
            std::vector<Symbol> x(n);
            for (auto& b : x) b = static_cast<Symbol>(rng.below(2));
            write_word(out, x, n);
            return 0;
        }
        if (*renc) {
            const auto p = resolve(c_renc);
            require_codec(p, "repeat");
            const BinaryLdc ldc(p.repeat.ldc);
            const auto x = read_bits(in, p.repeat.n);
            write_word(out, enc_repeat(ldc, p.repeat, x), p.repeat.n);
            return 0;
        }
        if (*rdec) {
            auto p = resolve(c_rdec);
            require_codec(p, "repeat");
            if (budget_bits) p = p.with("budget_bits", std::to_string(*budget_bits));
            const BinaryLdc ldc(p.repeat.ldc);
            const auto& rp = p.repeat;
            auto word = read_word(in, ldc.length() * rp.copies);
            SymbolStream s(std::move(word));
            Rng rng(seed);
            json j;
            std::vector<std::string> violations;
            RepeatResult res;
            try {
                res = dec_repeat(ldc, rp, s, rng);
            } catch (const OutOfOrderWrite&) {
                violations.push_back("out_of_order");
            }
            if (res.budget_exceeded) violations.push_back("memory_budget");
            if (s.reads() != res.copies_used * ldc.length()) violations.push_back("single_pass");
            std::vector<Symbol> decoded;
            for (const auto& [i, b] : res.tape.entries()) decoded.push_back(b);
            bool success = res.completed && violations.empty();
            if (!expect.empty()) {
                const auto x = read_bits(expect, rp.n);
                success = success && res.tape.equals(x);
                j["expected"] = bits_to_hex(x);
            }
            j["command"] = "repeat-decode";
            j["profile"] = p.to_json();
            j["seed"] = seed;
            j["success"] = success;
            j["completed"] = res.completed;
            j["exhausted"] = res.exhausted;
            j["copies_used"] = res.copies_used;
            j["phase1_copies"] = res.phase1_copies;
            j["peak_bits"] = res.peak_bits;
            j["budget_bits"] = rp.budget_bits;
            j["violations"] = violations;
            j["per_copy_c"] = res.per_copy_c;
            j["per_copy_accepted"] = res.per_copy_accepted;
            j["decoded"] = bits_to_hex(decoded);
            j["decoded_bits"] = decoded.size();
            emit(j, report);
            if (!out.empty() && res.completed) write_word(out, decoded, rp.n);
            return violations.empty() ? 0 : kInvariantExit;
        }
        if (*lenc) {
            const auto p = resolve(c_lenc);
            require_codec(p, "tensor");
            const TensorCodec codec(p.tensor);
            const auto x = read_bits(in, p.tensor.n());
            write_word(out, codec.encode(x), p.tensor.n());
            return 0;
        }
        if (*ldec) {
            const auto p = resolve(c_ldec);
            require_codec(p, "tensor");
            const TensorCodec codec(p.tensor);
            const std::size_t n = p.tensor.n();
            Rng rng(seed);
            const auto ell = functional_bits(read_functional(functional), n, rng);
            SymbolStream s(read_word(in, codec.length()));
            TensorDiagnostics diag;
            const Symbol value = codec.linear_dec(s, ell, rng, &diag);
            std::vector<std::string> violations;
            if (diag.live_violation) violations.push_back("overlap_cap");
            if (s.position() != codec.length()) violations.push_back("single_pass");
            json j;
            j["command"] = "linear-decode";
            j["profile"] = p.to_json();
            j["seed"] = seed;
            j["functional"] = bits_to_hex(ell);
            j["value"] = value;
            std::size_t erased = 0;
            json values = json::array();
            for (const auto& v : diag.instance_values) {
                erased += !v;
                values.push_back(v ? json(*v) : json(nullptr));
            }
            j["instance_values"] = values;
            j["erased_instances"] = erased;
            j["max_live"] = diag.max_live;
            j["cap"] = diag.cap;
            j["violations"] = violations;
            bool success = violations.empty();
            if (!expect.empty()) {
                const auto x = read_bits(expect, n);
                Symbol truth = 0;
                for (std::size_t i = 0; i < n; ++i) truth ^= x[i] & ell[i];
                j["expected"] = truth;
                success = success && truth == value;
            }
            j["success"] = success;
            emit(j, report);
            return violations.empty() ? 0 : kInvariantExit;
        }
        if (*cor) {
            auto p = resolve(c_cor);
            if (rho) p = p.with("rho", std::to_string(*rho));
            if (attack) p = p.with("attack", *attack);
            const auto& e = p.exp;
            std::size_t length = 0, block = 0, n = 0;
            std::vector<std::size_t> blocks;
            std::optional<BinaryLdc> ldc;
            if (p.codec == "repeat") {
                ldc.emplace(p.repeat.ldc);
                length = ldc->length() * p.repeat.copies;
                block = ldc->length();
                n = p.repeat.n;
            } else {
                const TensorCodec codec(p.tensor);
                length = codec.length();
                block = codec.inner_len();
                n = p.tensor.n();
                for (std::size_t b = 0; b < codec.blocks(); ++b) blocks.push_back((seed + b) % codec.blocks());
            }
            const auto word = read_word(in, length);
            if (e.attack == AttackKind::BlockzeroWindow && p.codec == "repeat") {
                const auto outputs = estimate_repeat_outputs(*ldc, p.repeat, e.blockzero_samples, e.seed ^ 0x5bd1e995ULL);
                blocks = blockzero_targets(outputs, seed % n, e.blockzero_step, p.repeat.r_out, 1);
            }
            Rng rng(seed);
            Corruption bad;
            if (e.attack == AttackKind::BlockzeroWindow) {
                bad = blockzero_attack(word, block, blocks, e.rho);
            } else {
                AttackStrategy st;
                st.kind = e.attack;
                st.block_len = block;
                st.copy_index = e.copy_index;
                st.erasure_share = e.erasure_share;
                bad = corrupt(word, st, e.rho, rng);
            }
            write_word(out, bad.word, n);
            if (!mask.empty()) {
                auto m = corruption_mask(word, bad.word, 1);
                m.n = n;
                write_stream_file(mask, m);
            }
            json j{{"command", "corrupt"}, {"profile", p.to_json()}, {"seed", seed},
                   {"attack", to_string(e.attack)}, {"rho", e.rho}, {"limit", bad.limit},
                   {"changed", bad.changed}, {"erased", bad.erased}, {"distance", bad.distance()}};
            if (e.attack == AttackKind::BlockzeroWindow) {
                j["targeted_blocks"] = blocks;
                j["heuristic"] = true;
            }
            const bool within = 2 * bad.changed + bad.erased <= 2 * bad.limit;
            j["violations"] = within ? json::array() : json::array({"channel_budget"});
            if (!report.empty()) emit(j, report);
            return within ? 0 : kInvariantExit;
        }
        if (*run) {
            auto p = resolve(c_run);
            if (trials) p = p.with("trials", std::to_string(*trials));
            if (run->count("--seed")) p = p.with("seed", std::to_string(seed));
            if (rho) p = p.with("rho", std::to_string(*rho));
            if (attack) p = p.with("attack", *attack);
            if (workers) p = p.with("workers", std::to_string(*workers));
            const auto rep = run_experiment(p);
            emit(rep, report);
            const auto& agg = rep["aggregates"];
            std::cerr << p.name << ": " << agg["successes"] << "/" << agg["trials"] << " succeeded, invariants "
                      << rep["invariants"]["total"] << "\n";
            return invariants_clean(rep) ? 0 : kInvariantExit;
        }
        if (*ver) {
            std::optional<Profile> p;
            if (!c_ver.profile.empty()) p = resolve(c_ver);
            const auto rep = verify_code_tables(p ? &*p : nullptr);
            emit(rep, report);
            return rep["all_pass"].get<bool>() ? 0 : kInvariantExit;
        }
        if (*show) {
            if (list) {
                for (const auto& name : builtin_profile_names()) std::cout << name << "\n";
                return 0;
            }
            const auto p = resolve(c_show);
            std::cout << p.text();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
