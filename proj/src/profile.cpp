#include "streamcode/profile.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "streamcode/errors.hpp"

namespace streamcode {

namespace {

const std::string kOverride = "override.";

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(unsigned v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "1" : "0"; }
std::string fmt(const std::string& v) { return v; }

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_value(const std::string& s);

template <>
std::size_t parse_value<std::size_t>(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidArgument("not a non-negative integer");
    return v;
}
template <>
unsigned parse_value<unsigned>(const std::string& s) {
    const auto v = parse_value<std::size_t>(s);
    if (v > UINT32_MAX) throw InvalidArgument("out of range");
    return static_cast<unsigned>(v);
}
template <>
double parse_value<double>(const std::string& s) {
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw InvalidArgument("not a number");
    return v;
}
template <>
bool parse_value<bool>(const std::string& s) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw InvalidArgument("not a boolean");
}
template <>
std::string parse_value<std::string>(const std::string& s) {
    return s;
}

class Resolver {
public:
    Resolver(std::map<std::string, std::string> plain, std::map<std::string, std::string> over, Profile& out)
        : plain_(std::move(plain)), over_(std::move(over)), out_(out) {}

    template <typename T>
    T base(const std::string& key, T fallback) {
        used_.insert(key);
        if (over_.count(key)) error(key, "is not a derived quantity; drop the override. prefix");
        T v = fallback;
        if (auto it = plain_.find(key); it != plain_.end()) {
            try {
                v = parse_value<T>(it->second);
            } catch (const Error& e) {
                error(key, std::string(e.what()) + " (" + it->second + ")");
            }
        }
        out_.base[key] = fmt(v);
        return v;
    }

    /// formula: value from its formula, or the reason it has none.
    template <typename T>
    T derived(const std::string& key, const std::function<T()>& formula, T fallback = T{}) {
        used_.insert(key);
        std::optional<T> f;
        std::string why;
        try {
            f = formula();
        } catch (const std::exception& e) {
            why = e.what();
        }
        T v = f ? *f : fallback;
        if (auto it = over_.find(key); it != over_.end()) {
            try {
                v = parse_value<T>(it->second);
                out_.overrides.insert(key);
            } catch (const Error& e) {
                error(kOverride + key, std::string(e.what()) + " (" + it->second + ")");
            }
        } else if (auto it2 = plain_.find(key); it2 != plain_.end()) {
            try {
                const T given = parse_value<T>(it2->second);
                if (!f)
                    error(key, "has no formula value (" + why + "); write override." + key);
                else if (!(given == *f))
                    error(key, "differs from the formula value " + fmt(*f) + "; write override." + key);
                v = given;
            } catch (const Error& e) {
                error(key, std::string(e.what()) + " (" + it2->second + ")");
            }
        } else if (!f) {
            error(key, "has no formula value (" + why + "); set override." + key);
        }
        out_.derived[key] = fmt(v);
        return v;
    }

    void error(const std::string& key, const std::string& what) { errors_.push_back(key + ": " + what); }

    void finish() {
        for (const auto& [k, v] : plain_)
            if (!used_.count(k)) error(k, "unknown key");
        for (const auto& [k, v] : over_)
            if (!used_.count(k)) error(kOverride + k, "unknown key");
        if (!errors_.empty()) {
            std::string msg = "invalid profile";
            if (!out_.name.empty()) msg += " '" + out_.name + "'";
            msg += ":";
            for (const auto& e : errors_) msg += "\n  " + e;
            throw ProfileError(msg);
        }
    }

    template <typename Fn>
    void check(Fn&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            errors_.push_back(e.what());
        }
    }

private:
    std::map<std::string, std::string> plain_, over_;
    Profile& out_;
    std::set<std::string> used_;
    std::vector<std::string> errors_;
};

void resolve_experiment(Resolver& r, Profile& p) {
    auto& e = p.exp;
    e.rho = r.base<double>("rho", 0.0);
    if (!(e.rho >= 0.0 && e.rho <= 1.0)) r.error("rho", "must lie in [0, 1]");
    const auto attack = r.base<std::string>("attack", "uniform_flip");
    try {
        e.attack = attack_from_string(attack);
    } catch (const Error& ex) {
        r.error("attack", ex.what());
    }
    e.trials = r.base<std::size_t>("trials", 100);
    e.seed = static_cast<std::uint64_t>(r.base<std::size_t>("seed", 1));
    e.erasure_share = r.base<double>("erasure_share", 0.5);
    e.copy_index = r.base<std::size_t>("copy_index", 0);
    e.functional = r.base<std::string>("functional", "random");
    e.blockzero_samples = r.base<std::size_t>("blockzero.samples", 4);
    e.blockzero_step = r.base<std::size_t>("blockzero.step", 0);
    e.workers = r.base<unsigned>("workers", 1);
    if (e.workers == 0) r.error("workers", "must be >= 1");
}

void resolve_repeat(Resolver& r, Profile& p) {
    auto& rp = p.repeat;
    rp.n = r.base<std::size_t>("n", 64);
    rp.eps = r.base<double>("eps", 0.1);
    const double s = r.base<double>("s", 65536.0);
    rp.budget_bits = r.base<std::size_t>("budget_bits", 65536);
    const auto thr = r.base<std::string>("threshold", "strict");
    if (thr != "strict" && thr != "loose") r.error("threshold", "must be strict or loose");
    rp.loose_threshold = thr == "loose";
    rp.erasure_alphabet = r.base<bool>("erasure_alphabet", false);
    const double n = static_cast<double>(std::max<std::size_t>(rp.n, 2));

    const auto Q = r.derived<std::size_t>("Q", [&] {
        return static_cast<std::size_t>(std::max(1.0, std::round(repeat_regime(rp.n, s).Q)));
    });
    const double Qd = static_cast<double>(Q);
    rp.copies = r.derived<std::size_t>("k", [&] { return static_cast<std::size_t>(std::ceil(Qd * Qd * n / s)); });
    rp.checksums = r.derived<std::size_t>("v", [&] {
        const double lg = std::log2(n);
        return static_cast<std::size_t>(std::ceil(lg * lg));
    });
    rp.r_out = r.derived<std::size_t>("r_out", [&] {
        return static_cast<std::size_t>(std::max(1.0, std::floor(s / (Qd * Qd))));
    });

    const double leps = r.derived<double>("ldc.eps", [&] { return rp.eps; });
    auto formula = [&] { return BinaryLdcParams::asymptotic(rp.n, leps, Q); };
    auto& l = rp.ldc;
    l.n = rp.n;
    l.eps = leps;
    l.Q = Q;
    l.field_degree = r.derived<unsigned>("ldc.field_degree", [&] { return formula().field_degree; });
    l.degree = r.derived<unsigned>("ldc.degree", [&] { return formula().degree; });
    l.variables = r.derived<unsigned>("ldc.variables", [&] { return formula().variables; });
    l.t_smooth = r.derived<unsigned>("ldc.t", [&] { return formula().t_smooth; });
    l.k_adv = r.derived<unsigned>("ldc.k_adv", [&] { return formula().k_adv; });
    l.advice_iterations = r.derived<unsigned>("ldc.advice_iterations", [&] { return formula().advice_iterations; });
    r.check([&] { rp.validate(); });
}

void resolve_tensor(Resolver& r, Profile& p) {
    auto& tp = p.tensor;
    const auto n = r.base<std::size_t>("n", 16);
    tp.eps = r.base<double>("eps", 0.1);
    const double s = r.base<double>("s", 1024.0);
    const auto k = r.base<unsigned>("ldc.k", 4);
    const auto Q = r.base<std::size_t>("Q", 60);
    tp.inner_copies = r.base<unsigned>("inner_copies", 4);
    const auto seed = r.base<std::size_t>("ldc.seed", 1);

    tp.r = r.derived<std::size_t>("r", [&] {
        return static_cast<std::size_t>(std::max(2.0, std::round(tensor_regime(std::max<std::size_t>(n, 2), 0.1, s).r)));
    });
    tp.d = r.derived<unsigned>("d", [&] {
        if (tp.r < 2) throw ProfileError("r < 2");
        const auto d = static_cast<unsigned>(std::llround(std::log(static_cast<double>(n)) / std::log(static_cast<double>(tp.r))));
        std::size_t pw = 1;
        for (unsigned i = 0; i < d; ++i) pw *= tp.r;
        if (pw != n) throw ProfileError("n is not a power of r");
        return d;
    });
    tp.instances = r.derived<unsigned>("instances", [&] { return TensorParams::default_instances(n); });
    const double leps = r.derived<double>("ldc.eps", [&] { return tp.eps / (10.0 * std::max(1U, tp.d)); });
    auto formula = [&] { return LargeLdcParams::asymptotic(tp.r, leps, Q, k); };
    auto& l = tp.ldc;
    l.symbol_degree = k;
    l.r = tp.r;
    l.eps = leps;
    l.Q = Q;
    l.inner_seed = seed;
    l.ext = r.derived<unsigned>("ldc.ext", [&] { return formula().ext; });
    l.degree = r.derived<unsigned>("ldc.degree", [&] { return formula().degree; });
    l.variables = r.derived<unsigned>("ldc.variables", [&] { return formula().variables; });
    l.t = r.derived<unsigned>("ldc.t", [&] { return formula().t; });
    const auto cap = r.derived<std::size_t>("cap", [&] {
        l.validate();
        return overlap_cap(tp.r, Q, l.points());
    });
    if (p.overrides.count("cap")) tp.cap_override = cap;
    std::size_t pw = 1;
    for (unsigned i = 0; i < tp.d; ++i) pw *= tp.r;
    if (pw != n) r.error("n", "must equal r^d = " + std::to_string(pw));
    r.check([&] { tp.validate(); });
}

Profile parse_entries(const std::map<std::string, std::string>& raw) {
    Profile p;
    p.raw = raw;
    std::map<std::string, std::string> plain, over;
    for (const auto& [k, v] : raw) {
        if (k.rfind(kOverride, 0) == 0)
            over[k.substr(kOverride.size())] = v;
        else
            plain[k] = v;
    }
    p.name = plain.count("name") ? plain["name"] : "";
    p.codec = plain.count("codec") ? plain["codec"] : "";
    plain.erase("name");
    plain.erase("codec");
    Resolver r(plain, over, p);
    resolve_experiment(r, p);
    if (p.codec == "repeat")
        resolve_repeat(r, p);
    else if (p.codec == "tensor")
        resolve_tensor(r, p);
    else
        r.error("codec", "must be repeat or tensor (got '" + p.codec + "')");
    r.finish();
    return p;
}

const std::map<std::string, std::string>& builtin_texts() {
    static const std::map<std::string, std::string> texts{
        {"repeat-toy",
         "name=repeat-toy\n"
         "codec=repeat\n"
         "n=64\n"
         "eps=0.1\n"
         "s=65536\n"
         "budget_bits=65536\n"
         "rho=0.05\n"
         "attack=uniform_flip\n"
         "trials=200\n"
         "seed=1\n"
         "override.Q=4096\n"
         "override.k=12\n"
         "override.v=16\n"
         "override.r_out=22\n"
         "override.ldc.eps=0.4\n"
         "override.ldc.field_degree=4\n"
         "override.ldc.degree=3\n"
         "override.ldc.variables=3\n"
         "override.ldc.t=4\n"
         "override.ldc.k_adv=1\n"
         "override.ldc.advice_iterations=9\n"},
        {"tensor-toy",
         "name=tensor-toy\n"
         "codec=tensor\n"
         "n=16\n"
         "eps=0.1\n"
         "s=1024\n"
         "Q=60\n"
         "ldc.k=4\n"
         "inner_copies=4\n"
         "rho=0.05\n"
         "attack=uniform_flip\n"
         "trials=300\n"
         "seed=1\n"
         "override.ldc.eps=0.1\n"
         "override.ldc.ext=1\n"
         "override.ldc.degree=3\n"
         "override.ldc.variables=1\n"
         "override.ldc.t=4\n"},
    };
    return texts;
}

}  // namespace

Profile parse_profile(const std::string& text) {
    std::map<std::string, std::string> raw;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> errors;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        raw[key] = trim(line.substr(eq + 1));
    }
    if (!errors.empty()) {
        std::string msg = "invalid profile:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ProfileError(msg);
    }
    return parse_entries(raw);
}

std::string Profile::text() const {
    std::ostringstream out;
    out << "name=" << name << "\ncodec=" << codec << "\n";
    for (const auto& [k, v] : base) out << k << "=" << v << "\n";
    for (const auto& k : overrides) out << kOverride << k << "=" << derived.at(k) << "\n";
    return out.str();
}

nlohmann::json Profile::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["codec"] = codec;
    j["settings"] = base;
    j["derived"] = derived;
    j["overrides"] = std::vector<std::string>(overrides.begin(), overrides.end());
    j["text"] = text();
    j["describe"] = codec == "repeat" ? repeat.describe() : tensor.describe();
    return j;
}

Profile Profile::with(const std::map<std::string, std::string>& entries) const {
    auto r = raw;
    for (const auto& [key, value] : entries) {
        if (key.rfind(kOverride, 0) == 0)
            r.erase(key.substr(kOverride.size()));
        else
            r.erase(kOverride + key);
        r[key] = value;
    }
    return parse_entries(r);
}

Profile Profile::with(const std::string& key, const std::string& value) const { return with({{key, value}}); }

Profile builtin_profile(const std::string& name) {
    const auto& t = builtin_texts();
    const auto it = t.find(name);
    if (it == t.end()) throw ProfileError("unknown built-in profile: " + name);
    return parse_profile(it->second);
}

std::vector<std::string> builtin_profile_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : builtin_texts()) out.push_back(k);
    return out;
}

Profile load_profile(const std::string& name_or_path) {
    if (builtin_texts().count(name_or_path)) return builtin_profile(name_or_path);
    std::ifstream in(name_or_path);
    if (!in) throw ProfileError("no built-in profile or readable file named " + name_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("report is not valid JSON: ") + e.what());
        }
        if (!j.contains("profile") || !j["profile"].contains("text"))
            throw FormatError("report carries no profile.text");
        return parse_profile(j["profile"]["text"].get<std::string>());
    }
    return parse_profile(text);
}

}  // namespace streamcode
