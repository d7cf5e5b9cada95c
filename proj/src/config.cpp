#include "fsk/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace fsk {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& token, int line, const std::string& field) {
    if (token == "inf" || token == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size())
            throw ConfigError("trailing characters in number '" + token + "'", line, field);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + token + "'", line, field);
    }
}

} // namespace

ConfigError::ConfigError(const std::string& msg, int line_, std::string field_)
    : std::runtime_error(line_ > 0 ? "config line " + std::to_string(line_) + ", field '" +
                                         field_ + "': " + msg
                                   : "config field '" + field_ + "': " + msg),
      line(line_),
      field(std::move(field_)) {}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'", 0, "path");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line, stripped);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line, "");
        if (value.empty()) throw ConfigError("empty value", line, key);
        if (kv.entries_.count(key))
            throw ConfigError("duplicate key (first on line " +
                                  std::to_string(kv.entries_[key].line) + ")",
                              line, key);
        kv.entries_[key] = Entry{value, line, false};
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

int KeyValueFile::line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

std::string KeyValueFile::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required field", 0, key);
    it->second.consumed = true;
    return it->second.value;
}

double KeyValueFile::get_double(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required field", 0, key);
    it->second.consumed = true;
    return parse_double(it->second.value, it->second.line, key);
}

std::uint64_t KeyValueFile::get_uint(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required field", 0, key);
    it->second.consumed = true;
    const std::string& v = it->second.value;
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("expected a nonnegative integer, got '" + v + "'",
                          it->second.line, key);
    return out;
}

std::vector<double> KeyValueFile::get_list(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required field", 0, key);
    it->second.consumed = true;
    std::istringstream in(it->second.value);
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(parse_double(token, it->second.line, key));
    if (out.empty()) throw ConfigError("empty list", it->second.line, key);
    return out;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}
double KeyValueFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}
std::uint64_t KeyValueFile::get_uint(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint(key) : fallback;
}
std::vector<double> KeyValueFile::get_list(const std::string& key,
                                           std::vector<double> fallback) const {
    return has(key) ? get_list(key) : std::move(fallback);
}

std::vector<std::string> KeyValueFile::unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_)
        if (!entry.consumed) out.push_back(key);
    return out;
}

namespace {

const std::set<std::string> kKnownIds = {"cor_plapplied", "cor_plapplied2", "thm_plgge",
                                         "cor_plggecor", "cor_lp_complex"};

PotentialSpec parse_potential(const KeyValueFile& kv, double& amplitude_out) {
    const std::string spec = kv.get_string("potential", "zero");
    const int line = kv.line_of("potential");
    std::istringstream in(spec);
    std::string kind;
    in >> kind;
    if (kind == "zero") {
        std::string extra;
        if (in >> extra) throw ConfigError("'zero' takes no arguments", line, "potential");
        return PotentialSpec::zero();
    }
    if (kind == "hardy") {
        std::string token;
        if (!(in >> token)) throw ConfigError("'hardy' needs a coupling", line, "potential");
        const double a = parse_double(token, line, "potential");
        double cutoff = 0.0;
        if (in >> token) cutoff = parse_double(token, line, "potential");
        return PotentialSpec::hardy(a, cutoff);
    }
    if (kind == "bounded") {
        std::string token;
        if (!(in >> token)) throw ConfigError("'bounded' needs an amplitude", line, "potential");
        const double amp = parse_double(token, line, "potential");
        if (!(amp >= 0.0) || !std::isfinite(amp))
            throw ConfigError("amplitude must be finite and >= 0", line, "potential");
        amplitude_out = amp;
        // deterministic nonnegative sample; values are filled once the grid is known
        PotentialSpec p;
        p.kind = PotentialSpec::Kind::bounded_sample;
        return p;
    }
    throw ConfigError("unknown potential kind '" + kind + "'", line, "potential");
}

ExperimentConfig from_kv(const KeyValueFile& kv) {
    ExperimentConfig cfg;
    cfg.id = kv.get_string("id");
    cfg.alpha = kv.get_double("alpha", cfg.alpha);
    cfg.d = static_cast<int>(kv.get_double("d", cfg.d));
    cfg.grid.d = cfg.d;
    cfg.grid.n = static_cast<int>(kv.get_double("grid_n", cfg.grid.n));
    cfg.grid.box_length = kv.get_double("grid_box", cfg.grid.box_length);
    cfg.potential = parse_potential(kv, cfg.bounded_amplitude);
    if (cfg.potential.kind == PotentialSpec::Kind::bounded_sample) {
        try {
            cfg.grid.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), 0, "grid_n");
        }
        std::vector<double> vals(cfg.grid.total());
        for (int i = 0; i < cfg.grid.total(); ++i)
            vals[i] = cfg.bounded_amplitude *
                      (1.0 + std::sin(2.0 * std::numbers::pi * i / cfg.grid.total()));
        cfg.potential = PotentialSpec::bounded(std::move(vals));
    }
    cfg.thetas = kv.get_list("theta", cfg.thetas);
    cfg.moduli = kv.get_list("modulus", cfg.moduli);
    cfg.rhos = kv.get_list("rho", cfg.rhos);
    // default sweep {0, (alpha-1)/alpha if positive, 1}
    std::vector<double> zeta_default{0.0};
    if (cfg.alpha > 1.0) zeta_default.push_back((cfg.alpha - 1.0) / cfg.alpha);
    zeta_default.push_back(1.0);
    cfg.zetas = kv.get_list("zeta", zeta_default);
    cfg.epsilon = kv.get_double("epsilon", cfg.epsilon);
    cfg.p = kv.get_double("p", cfg.p);
    cfg.q = kv.get_double("q", cfg.q);
    cfg.sigma = kv.get_double("sigma", cfg.sigma);
    cfg.beta = kv.get_double("beta", cfg.beta);
    cfg.t_ref = kv.get_double("t_ref", cfg.t_ref);
    cfg.outdir = kv.get_string("outdir", cfg.outdir);
    cfg.seed = kv.get_uint("seed", cfg.seed);
    cfg.tol.realtime_slope_tol = kv.get_double("realtime_slope_tol", cfg.tol.realtime_slope_tol);
    cfg.tol.slope_margin = kv.get_double("slope_margin", cfg.tol.slope_margin);
    cfg.tol.oracle_rel = kv.get_double("oracle_rel", cfg.tol.oracle_rel);
    cfg.tol.stability_slack = kv.get_double("stability_slack", cfg.tol.stability_slack);
    cfg.tol.duality_rel = kv.get_double("duality_rel", cfg.tol.duality_rel);
    for (const std::string& key : kv.unconsumed())
        throw ConfigError("unknown field", kv.line_of(key), key);
    cfg.validate();
    return cfg;
}

} // namespace

void ExperimentConfig::validate() const {
    if (!kKnownIds.count(id))
        throw ConfigError("unknown experiment id '" + id + "'", 0, "id");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ConfigError("alpha must be positive and finite", 0, "alpha");
    if ((id == "cor_plapplied" || id == "cor_plapplied2") && !(alpha < 2.0))
        throw ConfigError("this bound family requires alpha < 2", 0, "alpha");
    if (d < 1 || d > 3) throw ConfigError("d must be 1, 2, or 3", 0, "d");
    if (grid.d != d) throw ConfigError("grid dimension disagrees with d", 0, "grid_n");
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), 0, "grid_n");
    }
    if (thetas.empty()) throw ConfigError("need at least one theta", 0, "theta");
    for (double th : thetas)
        if (!(std::abs(th) < std::numbers::pi / 2) || !std::isfinite(th))
            throw ConfigError("|theta| must be < pi/2", 0, "theta");
    if (moduli.empty()) throw ConfigError("need at least one modulus", 0, "modulus");
    for (double m : moduli)
        if (!(m > 0.0) || !std::isfinite(m))
            throw ConfigError("modulus must be positive and finite", 0, "modulus");
    for (double rho : rhos)
        if (!(rho >= 0.0) || !std::isfinite(rho))
            throw ConfigError("rho must be >= 0 and finite", 0, "rho");
    if (id == "cor_plapplied" && rhos.empty())
        throw ConfigError("cor_plapplied needs a rho sweep", 0, "rho");
    for (double z : zetas)
        if (!(z >= 0.0) || !std::isfinite(z))
            throw ConfigError("zeta must be >= 0 and finite", 0, "zeta");
    if (!(epsilon > 1e-6 && epsilon < 1.0 - 1e-6))
        throw ConfigError("epsilon must lie strictly inside (0,1)", 0, "epsilon");
    if (!(p >= 1.0)) throw ConfigError("p must be >= 1", 0, "p");
    if (!(q >= 1.0)) throw ConfigError("q must be >= 1", 0, "q");
    if (id == "thm_plgge" && !(p <= 2.0 + 1e-12 && (q >= 2.0 || std::isinf(q))))
        throw ConfigError("thm_plgge needs 1 <= p <= 2 <= q", 0, "p");
    if ((id == "cor_plggecor" || id == "cor_lp_complex") && !(p <= 2.0 + 1e-12))
        throw ConfigError("this bound family needs p in [1,2]", 0, "p");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive", 0, "sigma");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ConfigError("beta must be positive and finite", 0, "beta");
    if (!(t_ref > 0.0) || !std::isfinite(t_ref))
        throw ConfigError("t_ref must be positive and finite", 0, "t_ref");
    if (outdir.empty()) throw ConfigError("outdir must not be empty", 0, "outdir");
    if (!(tol.realtime_slope_tol >= 0.0 && tol.slope_margin >= 0.0 && tol.oracle_rel > 0.0 &&
          tol.stability_slack >= 1.0 && tol.duality_rel > 0.0))
        throw ConfigError("tolerances out of range", 0, "tolerances");
    if (potential.kind == PotentialSpec::Kind::hardy && !(potential.hardy_a > 0.0))
        throw ConfigError("hardy coupling must be positive (V >= 0 required)", 0, "potential");
    if (potential.kind == PotentialSpec::Kind::bounded_sample)
        for (double v : potential.values)
            if (!(v >= 0.0))
                throw ConfigError("bounded potential must be nonnegative", 0, "potential");
}

ExperimentConfig load_config(const std::string& path) {
    return from_kv(KeyValueFile::parse_file(path));
}

ExperimentConfig load_config_text(const std::string& text, const std::string& origin) {
    return from_kv(KeyValueFile::parse_text(text, origin));
}

} // namespace fsk
