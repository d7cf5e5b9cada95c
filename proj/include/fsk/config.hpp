// config.hpp - plain-text experiment configuration with line/field diagnostics
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsk/op.hpp"

namespace fsk {

// Parse or validation failure; line is 0 when no source line applies.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& msg, int line_, std::string field_);
    int line = 0;
    std::string field;
};

// key = value file, one pair per line, '#' starts a comment, blank lines
// skipped. Keys are unique; values keep interior whitespace for list fields.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    int line_of(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;

    // with-default variants for optional keys
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

    // keys the typed loader never consumed; used to reject unknown fields
    std::vector<std::string> unconsumed() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };
    std::map<std::string, Entry> entries_;
    std::string origin_;
};

struct Tolerances {
    double realtime_slope_tol = 0.1; // real-time profile regression slack (log2)
    double slope_margin = 0.15;      // complex-time annulus slope slack (log2)
    double oracle_rel = 1e-3;        // grid vs closed-form agreement
    double stability_slack = 4.0;    // fitted-constant spread budget across sweeps
    double duality_rel = 1e-9;       // transpose-conjugate norm identity
};

// One experiment suite: which bound family to verify and on what sweep.
struct ExperimentConfig {
    std::string id; // cor_plapplied | cor_plapplied2 | thm_plgge | cor_plggecor | cor_lp_complex
    double alpha = 1.0;
    int d = 1;
    GridSpec grid{1, 1024, 96.0};
    PotentialSpec potential = PotentialSpec::zero();
    double bounded_amplitude = 0.0; // recorded amplitude when potential = bounded
    std::vector<double> thetas{0.0};
    std::vector<double> moduli{1.0};
    std::vector<double> rhos;  // tail radii as multiples of |z|^{1/alpha}
    std::vector<double> zetas{0.0};
    double epsilon = 0.5;
    double p = 1.0;
    double q = 2.0;
    double sigma = 2.0;
    double beta = 1.5;
    double t_ref = 1.0; // real-time precondition time
    std::string outdir = ".";
    std::uint64_t seed = 1;
    Tolerances tol;

    // re-validates every referenced module precondition
    void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config_text(const std::string& text, const std::string& origin);

} // namespace fsk
