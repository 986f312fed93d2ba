#include "migshift/reliability.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace migshift {

void TechNodeParams::validate() const
{
    for (double v : {vdd, wl_boost, c_cell_fF, access_l_um, access_w_um, sa_nmos_w_um,
                     bl_r_per_cell_mohm, bl_c_per_cell_fF, trise_ns})
        if (!(v > 0.0))
            throw ParameterError(fmt::format("technology node '{}' has a non-positive parameter", name));
}

const std::vector<TechNodeParams>& tech_node_presets()
{
    //                                  vdd  boost  Ccell   L      W      SA W   R/cell  C/cell trise
    static const std::vector<TechNodeParams> presets = {
        {"600nm", 3.3, 5.0, 120.0, 0.600, 1.200, 140.0, 1000.0, 2.00, 5.0},
        {"180nm", 1.8, 3.3, 50.0, 0.180, 0.360, 42.0, 400.0, 0.80, 2.0},
        {"45nm", 1.5, 3.0, 30.0, 0.045, 0.180, 10.5, 200.0, 0.40, 0.7},
        {"22nm", 1.2, 2.5, 25.0, 0.022, 0.044, 7.0, 120.0, 0.24, 0.5},
        {"20nm", 1.1, 2.4, 25.0, 0.020, 0.040, 6.0, 110.0, 0.22, 0.4},
        {"10nm", 1.1, 2.2, 18.0, 0.012, 0.025, 4.5, 100.0, 0.18, 0.3},
    };
    return presets;
}

const TechNodeParams& find_tech_node(std::string_view name)
{
    for (const auto& n : tech_node_presets())
        if (n.name == name)
            return n;
    throw ConfigError(fmt::format("unknown technology node '{}'", name));
}

std::vector<TechNodeParams> load_tech_nodes(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open node table " + path);

    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');)
            cells.push_back(c);
        return cells;
    };

    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("empty node table " + path);
    const auto header = split(line);
    const std::vector<std::string> expected = {"node", "vdd_V", "wl_boost_V", "c_cell_fF",
                                               "access_l_um", "access_w_um", "sa_nmos_w_um",
                                               "bl_r_per_cell_mohm", "bl_c_per_cell_fF", "trise_ns"};
    if (header != expected)
        throw ConfigError("unexpected node table header in " + path);

    std::vector<TechNodeParams> nodes;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != expected.size())
            throw ConfigError(fmt::format("{}:{}: expected {} fields", path, line_no, expected.size()));
        std::array<double, 9> v{};
        for (std::size_t i = 0; i < v.size(); ++i) {
            try {
                std::size_t used = 0;
                v[i] = std::stod(cells[i + 1], &used);
                if (used != cells[i + 1].size())
                    throw std::invalid_argument(cells[i + 1]);
            } catch (const std::exception&) {
                throw ConfigError(fmt::format("{}:{}: bad number '{}'", path, line_no, cells[i + 1]));
            }
        }
        TechNodeParams n{cells[0], v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
        n.validate();
        nodes.push_back(n);
    }
    return nodes;
}

double MarginModel::c_sa_input_fF(const TechNodeParams& node) const
{
    return c_sa_input_ref_fF * node.sa_nmos_w_um / sa_nmos_w_ref_um;
}

double MarginModel::c_bitline_fF(const TechNodeParams& node) const
{
    return rows_per_subarray * node.bl_c_per_cell_fF + c_sa_input_fF(node);
}

double MarginModel::derating(const TechNodeParams& node, double distance) const
{
    const double c_cell = node.c_cell_fF;
    const double c_bl = c_bitline_fF(node);
    const double c_series = c_cell * c_bl / (c_cell + c_bl);
    const double r_access_kohm = r_access_ref_kohm * (node.access_l_um / node.access_w_um) / access_lw_ref;
    const double r_bl_ohm = rows_per_subarray * node.bl_r_per_cell_mohm * 1e-3;
    // kOhm * fF = 1e-3 ns, Ohm * fF = 1e-6 ns
    const double tau_ns = r_access_kohm * c_series * 1e-3 + distance * r_bl_ohm * c_bl * 1e-6;
    return 1.0 / (1.0 + tau_ns / node.trise_ns);
}

double sense_margin(double cell_voltage, const VariationTrial& trial, const MarginModel& model)
{
    const TechNodeParams& n = trial.perturbed;
    const double c_c = n.c_cell_fF;
    const double c_b = model.c_bitline_fF(n);
    if (!(c_c > 0.0) || !(c_b > 0.0))
        throw ParameterError("sense_margin: capacitances must be positive");
    const double v_pre = model.v_precharge(n);
    const double v_shared = (c_b * v_pre + c_c * cell_voltage) / (c_b + c_c);
    return std::abs(v_shared - v_pre) * 1e3;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

VariationTrial simulate_shift_trial(double level, std::uint64_t seed, const TechNodeParams& node,
                                    const MarginModel& model)
{
    if (level < 0.0 || level > 0.5)
        throw ParameterError(fmt::format("variation level {} outside [0, 0.5]", level));
    node.validate();

    VariationTrial t;
    t.seed = seed;
    t.level = level;
    t.perturbed = node;

    // Standard normals truncated at ±3 sigma, then scaled so that 3 sigma
    // maps to ±level. The draws do not depend on level, so every level sees
    // the same underlying sample for a given seed.
    std::mt19937_64 rng(seed);
    auto factor = [&]() {
        std::normal_distribution<double> normal(0.0, 1.0);
        double z = 0.0;
        do {
            z = normal(rng);
        } while (std::abs(z) > 3.0);
        return 1.0 + level * z / 3.0;
    };
    t.perturbed.c_cell_fF *= factor();
    t.perturbed.access_l_um *= factor();
    t.perturbed.access_w_um *= factor();
    t.perturbed.bl_c_per_cell_fF *= factor();
    t.perturbed.bl_r_per_cell_mohm *= factor();

    const double raw = sense_margin(t.perturbed.vdd, t, model);
    // Steps 1-2 read the source row; steps 3-4 release the migration rows,
    // which sit at the far end of the bitline from the stripe that senses
    // the destination column.
    const std::array<double, 4> distance = {model.src_row_fraction, model.src_row_fraction, 1.0, 1.0};
    for (std::size_t i = 0; i < 4; ++i) {
        t.margins_mV[i] = raw * model.derating(t.perturbed, distance[i]);
        if (t.pass && t.margins_mV[i] < model.sense_threshold_mV) {
            t.pass = false;
            t.failing_step = static_cast<int>(i + 1);
        }
    }
    return t;
}

MonteCarloResult monte_carlo(double level, std::size_t trials, const TechNodeParams& node,
                             std::uint64_t base_seed, const MarginModel& model, unsigned threads)
{
    if (trials == 0)
        throw ParameterError("monte_carlo: trials must be at least 1");
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(trials)));

    std::vector<MonteCarloResult> partial(threads);
    auto work = [&](unsigned w) {
        MonteCarloResult& r = partial[w];
        for (std::size_t i = w; i < trials; i += threads) {
            const auto t = simulate_shift_trial(level, trial_seed(base_seed, i), node, model);
            ++r.trials;
            if (!t.pass) {
                ++r.failures;
                ++r.failures_by_step[static_cast<std::size_t>(*t.failing_step - 1)];
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(work, w);
        for (auto& th : pool)
            th.join();
    }

    MonteCarloResult total;
    total.level = level;
    for (const auto& r : partial) {
        total.trials += r.trials;
        total.failures += r.failures;
        for (std::size_t s = 0; s < 4; ++s)
            total.failures_by_step[s] += r.failures_by_step[s];
    }
    return total;
}

double calibrate_threshold(double level, double target_rate, std::size_t trials,
                           const TechNodeParams& node, std::uint64_t base_seed, MarginModel model)
{
    if (trials == 0 || target_rate <= 0.0 || target_rate >= 1.0)
        throw ParameterError("calibrate_threshold: need trials >= 1 and 0 < target < 1");
    model.sense_threshold_mV = 0.0;
    std::vector<double> worst(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto t = simulate_shift_trial(level, trial_seed(base_seed, i), node, model);
        worst[i] = *std::min_element(t.margins_mV.begin(), t.margins_mV.end());
    }
    std::sort(worst.begin(), worst.end());
    const auto k = static_cast<std::size_t>(std::llround(target_rate * static_cast<double>(trials)));
    // Exactly k trials lie strictly below the midpoint between neighbours.
    if (k == 0)
        return worst.front();
    if (k >= trials)
        return std::nextafter(worst.back(), INFINITY);
    return 0.5 * (worst[k - 1] + worst[k]);
}

PlateGeometry mim_plate_area(double c_fF, double dielectric_nm, double eps_r)
{
    if (!(c_fF > 0.0) || !(dielectric_nm > 0.0) || !(eps_r > 0.0))
        throw ParameterError("mim_plate_area: inputs must be positive");
    const double area_m2 = (c_fF * 1e-15) * (dielectric_nm * 1e-9) / (kVacuumPermittivity * eps_r);
    PlateGeometry g;
    g.area_nm2 = area_m2 * 1e18;
    g.side_nm = std::sqrt(g.area_nm2);
    return g;
}

} // namespace migshift
