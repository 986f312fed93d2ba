#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace migshift {

/// Device and circuit parameters of one technology node.
struct TechNodeParams {
    std::string name;
    double vdd = 0.0;               ///< V
    double wl_boost = 0.0;          ///< V
    double c_cell_fF = 0.0;
    double access_l_um = 0.0;
    double access_w_um = 0.0;
    double sa_nmos_w_um = 0.0;
    double bl_r_per_cell_mohm = 0.0;
    double bl_c_per_cell_fF = 0.0;
    double trise_ns = 0.0;

    /// Throws ParameterError if any value is not positive.
    void validate() const;

    friend bool operator==(const TechNodeParams&, const TechNodeParams&) = default;
};

/// Built-in node table, 600nm down to 10nm.
const std::vector<TechNodeParams>& tech_node_presets();
/// Throws ConfigError for an unknown name.
const TechNodeParams& find_tech_node(std::string_view name);
/// Reads a node table from CSV with a header row naming the fields.
std::vector<TechNodeParams> load_tech_nodes(const std::string& path);

/// Threshold fitted so that ±10% variation at 22nm fails 14% of 100,000
/// trials (base seed 1). See calibrate_threshold().
inline constexpr double kCalibratedSenseThresholdMv = 69.8976;

/// Analytic charge-sharing model of the four sensing events of one shift.
///
/// Bitline capacitance is the cell-side wire (rows x per-cell C) plus the
/// sense-amplifier input, which scales with the SA device width. The raw
/// charge-sharing swing is derated by 1 / (1 + tau / trise) where tau adds
/// the access-transistor RC to the bitline RC between the cell and the
/// stripe that senses it.
struct MarginModel {
    std::uint32_t rows_per_subarray = 512;
    double c_sa_input_ref_fF = 20.0;     ///< at the reference SA width
    double sa_nmos_w_ref_um = 7.0;
    double r_access_ref_kohm = 5.0;      ///< access device at the reference L/W
    double access_lw_ref = 0.5;
    /// Position of the shifted source row along the bitline (0 = at its
    /// sense stripe, 1 = far end). Migration rows release from the far end.
    double src_row_fraction = 0.5;
    double sense_threshold_mV = kCalibratedSenseThresholdMv;

    double c_sa_input_fF(const TechNodeParams& node) const;
    double c_bitline_fF(const TechNodeParams& node) const;
    double v_precharge(const TechNodeParams& node) const { return node.vdd / 2.0; }

    /// Derating of the swing for a cell sitting `distance` (0..1) of the
    /// bitline away from its sense amplifier.
    double derating(const TechNodeParams& node, double distance) const;

    friend bool operator==(const MarginModel&, const MarginModel&) = default;
};

/// One Monte-Carlo sample: perturbed parameters and the shift outcome.
struct VariationTrial {
    std::uint64_t seed = 0;
    double level = 0.0;
    TechNodeParams perturbed;
    std::array<double, 4> margins_mV{};   ///< per sensing event
    bool pass = true;
    std::optional<int> failing_step;      ///< first failing event, 1..4
};

/// Raw charge-sharing deviation from the precharge level, in mV.
/// Throws ParameterError for non-positive capacitances.
double sense_margin(double cell_voltage, const VariationTrial& trial, const MarginModel& model);

/// Samples each varied parameter from a normal with 3 sigma = level x
/// nominal, truncated at ±level, then evaluates the four sensing events:
/// two source reads and the two migration-row releases.
VariationTrial simulate_shift_trial(double level, std::uint64_t seed, const TechNodeParams& node,
                                    const MarginModel& model = {});

/// Seed of trial `index` in a run started from `base_seed`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index);

struct MonteCarloResult {
    double level = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::array<std::size_t, 4> failures_by_step{};

    double rate() const { return trials ? static_cast<double>(failures) / trials : 0.0; }
};

/// Runs `trials` independent trials; the result does not depend on
/// evaluation order or on `threads`.
MonteCarloResult monte_carlo(double level, std::size_t trials, const TechNodeParams& node,
                             std::uint64_t base_seed, const MarginModel& model = {},
                             unsigned threads = 1);

/// Smallest-margin-per-trial quantile: the threshold at which exactly
/// round(target x trials) trials fail at the given level.
double calibrate_threshold(double level, double target_rate, std::size_t trials,
                           const TechNodeParams& node, std::uint64_t base_seed,
                           MarginModel model = {});

struct PlateGeometry {
    double area_nm2 = 0.0;
    double side_nm = 0.0;
};

inline constexpr double kVacuumPermittivity = 8.8541878128e-12;   ///< F/m

/// Parallel-plate MIM capacitor: A = C d / (eps0 eps_r), square side sqrt(A).
PlateGeometry mim_plate_area(double c_fF, double dielectric_nm, double eps_r);

} // namespace migshift
