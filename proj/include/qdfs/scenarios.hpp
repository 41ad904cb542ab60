#ifndef QDFS_SCENARIOS_HPP
#define QDFS_SCENARIOS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdfs/hilbert.hpp"
#include "qdfs/model.hpp"

namespace qdfs {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat scenario configuration. JSON file keys and `--set key=value` overrides
// share the same names; unknown keys are rejected.
struct ScenarioConfig {
    SystemParams params;                 // keys: g, kappa, gamma_a, gamma_b, omega1,
                                         //       omega2, phi_a1, phi_b1, varphi_a,
                                         //       varphi_b, n_max
    double t_end_periods = 100.0;        // fig1 time span, in units of pi/omega2
    int r_points = 101;                  // fig2 grid size on [0,1]
    int panels = 4096;                   // Simpson panels per period
    double safety = 0.02;                // RK4 dt = safety / max_rate
    int sample_stride = 100;             // store every N-th RK4 step
    unsigned seed = 12345;               // property scenarios
    std::string out;                     // output path ("" -> stdout)
    std::optional<std::array<Complex, 4>> state;  // key: state = re,im x4

    // Per-scenario defaults ("fig1" -> decay-study regime and phases,
    // "fig2" -> odd drive ratio for the phase sweep, others -> plain defaults).
    static ScenarioConfig defaults_for(const std::string& scenario);

    // Parse a JSON file (all keys optional, "" skips), then apply key=value
    // overrides and the output path on top of the current values.
    void merge(const std::string& config_path, const std::vector<std::string>& overrides,
               const std::string& out_path);
    void apply_override(const std::string& key_value);
    void apply_key(const std::string& key, const nlohmann::ordered_json& value);
};

// Scenario runners. Outputs are written atomically (temp file + rename);
// empty `out` writes to stdout. All throw on failure:
//   ConfigError / std::invalid_argument  -> bad input  (exit 2)
//   IntegrationError / InversionError / CyclicityError / ValidationError
//                                        -> numeric failure (exit 1)
void run_fig1(const ScenarioConfig& config);
void run_fig2(const ScenarioConfig& config);
void run_table1(const ScenarioConfig& config);
void run_invert(const ScenarioConfig& config);
void run_validate(const ScenarioConfig& config);

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// 17-significant-digit, locale-independent number formatting for CSV/JSON.
std::string format_number(double x);

}  // namespace qdfs

#endif
