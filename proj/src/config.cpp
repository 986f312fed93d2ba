#include "migshift/config.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace migshift {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ConfigError(fmt::format("{}: invalid value '{}'", key, text));
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value))
            throw ConfigError(fmt::format("{}: value must be finite", key));
    return value;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "off")
        return false;
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

struct Field {
    std::string key;
    std::function<void(SimConfig&, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

template <typename T>
Field number(std::string key, T SimConfig::*section, auto member)
{
    using V = std::remove_cvref_t<decltype(std::declval<T&>().*member)>;
    return {key,
            [key, section, member](SimConfig& c, std::string_view v) { (c.*section).*member = parse_number<V>(key, v); },
            [section, member](const SimConfig& c) { return fmt::format("{}", (c.*section).*member); }};
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        using G = DramGeometry;
        using T = TimingParams;
        using E = EnergyParams;
        using M = MarginModel;
        f.push_back(number("geometry.channels", &SimConfig::geometry, &G::channels));
        f.push_back(number("geometry.ranks_per_channel", &SimConfig::geometry, &G::ranks_per_channel));
        f.push_back(number("geometry.banks_per_rank", &SimConfig::geometry, &G::banks_per_rank));
        f.push_back(number("geometry.subarrays_per_bank", &SimConfig::geometry, &G::subarrays_per_bank));
        f.push_back(number("geometry.rows_per_subarray", &SimConfig::geometry, &G::rows_per_subarray));
        f.push_back(number("geometry.columns_per_row", &SimConfig::geometry, &G::columns_per_row));

        f.push_back(number("timing.tRCD", &SimConfig::timing, &T::tRCD));
        f.push_back(number("timing.tRP", &SimConfig::timing, &T::tRP));
        f.push_back(number("timing.tRAS", &SimConfig::timing, &T::tRAS));
        f.push_back(number("timing.tRC", &SimConfig::timing, &T::tRC));
        f.push_back(number("timing.tREFI_us", &SimConfig::timing, &T::tREFI_us));
        f.push_back(number("timing.tRFC", &SimConfig::timing, &T::tRFC));
        f.push_back(number("timing.t_aap", &SimConfig::timing, &T::t_aap));
        f.push_back(number("timing.t_shift_setup", &SimConfig::timing, &T::t_shift_setup));
        f.push_back(number("timing.t_tra", &SimConfig::timing, &T::t_tra));
        f.push_back(number("timing.t_burst", &SimConfig::timing, &T::t_burst));

        f.push_back(number("energy.e_aap_active", &SimConfig::energy, &E::e_aap_active));
        f.push_back(number("energy.e_shift_overhead", &SimConfig::energy, &E::e_shift_overhead));
        f.push_back(number("energy.e_ref_event", &SimConfig::energy, &E::e_ref_event));
        f.push_back(number("energy.e_tra_active", &SimConfig::energy, &E::e_tra_active));
        f.push_back(number("energy.e_act", &SimConfig::energy, &E::e_act));
        f.push_back(number("energy.e_pre", &SimConfig::energy, &E::e_pre));
        f.push_back(number("energy.e_burst_per_64B", &SimConfig::energy, &E::e_burst_per_64B));
        f.push_back(number("energy.p_standby_nW", &SimConfig::energy, &E::p_standby_nW));
        f.push_back(number("energy.transfer_low", &SimConfig::energy, &E::transfer_low));
        f.push_back(number("energy.transfer_high", &SimConfig::energy, &E::transfer_high));

        f.push_back({"refresh.enabled",
                     [](SimConfig& c, std::string_view v) { c.energy.refresh.enabled = parse_bool("refresh.enabled", v); },
                     [](const SimConfig& c) { return std::string(c.energy.refresh.enabled ? "true" : "false"); }});
        f.push_back({"refresh.mode",
                     [](SimConfig& c, std::string_view v) {
                         if (v == "energy_only")
                             c.energy.refresh.mode = RefreshMode::EnergyOnly;
                         else if (v == "blocking")
                             c.energy.refresh.mode = RefreshMode::Blocking;
                         else
                             throw ConfigError(fmt::format("refresh.mode: expected energy_only or blocking, got '{}'", v));
                     },
                     [](const SimConfig& c) {
                         return std::string(c.energy.refresh.mode == RefreshMode::Blocking ? "blocking" : "energy_only");
                     }});
        f.push_back({"refresh.prorate",
                     [](SimConfig& c, std::string_view v) { c.energy.refresh.prorate = parse_bool("refresh.prorate", v); },
                     [](const SimConfig& c) { return std::string(c.energy.refresh.prorate ? "true" : "false"); }});

        f.push_back({"refresh.quantum",
                     [](SimConfig& c, std::string_view v) {
                         c.energy.refresh.quantum = parse_number<double>("refresh.quantum", v);
                     },
                     [](const SimConfig& c) { return fmt::format("{}", c.energy.refresh.quantum); }});

        f.push_back(number("reliability.rows_per_subarray", &SimConfig::margin, &M::rows_per_subarray));
        f.push_back(number("reliability.c_sa_input_ref_fF", &SimConfig::margin, &M::c_sa_input_ref_fF));
        f.push_back(number("reliability.sa_nmos_w_ref_um", &SimConfig::margin, &M::sa_nmos_w_ref_um));
        f.push_back(number("reliability.r_access_ref_kohm", &SimConfig::margin, &M::r_access_ref_kohm));
        f.push_back(number("reliability.access_lw_ref", &SimConfig::margin, &M::access_lw_ref));
        f.push_back(number("reliability.src_row_fraction", &SimConfig::margin, &M::src_row_fraction));
        f.push_back(number("reliability.sense_threshold_mV", &SimConfig::margin, &M::sense_threshold_mV));

        f.push_back({"node", [](SimConfig& c, std::string_view v) { c.node = std::string(v); },
                     [](const SimConfig& c) { return c.node; }});
        f.push_back({"node_table", [](SimConfig& c, std::string_view v) { c.node_table = std::string(v); },
                     [](const SimConfig& c) { return c.node_table; }});
        f.push_back({"seed", [](SimConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>("seed", v); },
                     [](const SimConfig& c) { return fmt::format("{}", c.seed); }});
        f.push_back({"threads",
                     [](SimConfig& c, std::string_view v) { c.threads = parse_number<unsigned>("threads", v); },
                     [](const SimConfig& c) { return fmt::format("{}", c.threads); }});
        return f;
    }();
    return table;
}

} // namespace

void SimConfig::validate() const
{
    geometry.validate();
    timing.validate();
    energy.validate();
    if (threads == 0)
        throw ConfigError("threads must be at least 1");
    if (margin.rows_per_subarray == 0 || !(margin.c_sa_input_ref_fF >= 0.0) || !(margin.sa_nmos_w_ref_um > 0.0) ||
        !(margin.r_access_ref_kohm >= 0.0) || !(margin.access_lw_ref > 0.0) || margin.src_row_fraction < 0.0 ||
        margin.src_row_fraction > 1.0 || margin.sense_threshold_mV < 0.0)
        throw ConfigError("reliability model parameters out of range");
    tech_node();
}

TechNodeParams SimConfig::tech_node() const
{
    if (node_table.empty())
        return find_tech_node(node);
    for (auto& n : load_tech_nodes(node_table))
        if (n.name == node)
            return n;
    throw ConfigError(fmt::format("node '{}' not found in {}", node, node_table));
}

void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value)
{
    for (const auto& f : fields())
        if (f.key == key) {
            f.set(cfg, trim(value));
            return;
        }
    throw ConfigError(fmt::format("unknown key '{}'", key));
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& f : fields())
        keys.push_back(f.key);
    return keys;
}

SimConfig parse_config(std::string_view text, const std::string& origin)
{
    SimConfig cfg;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("{}:{}: expected key = value", origin, line_no));
        try {
            set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", origin, line_no, e.what()));
        }
    }
    return cfg;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string serialize_config(const SimConfig& cfg)
{
    std::string out;
    for (const auto& f : fields())
        out += fmt::format("{} = {}\n", f.key, f.get(cfg));
    return out;
}

std::string_view to_string(WorkloadKind k)
{
    switch (k) {
    case WorkloadKind::ShiftBench: return "SHIFT_BENCH";
    case WorkloadKind::TraceFile: return "TRACE_FILE";
    case WorkloadKind::Kernel: return "KERNEL";
    case WorkloadKind::Reliability: return "RELIABILITY";
    case WorkloadKind::Capacitor: return "CAPACITOR";
    }
    return "?";
}

void WorkloadSpec::validate() const
{
    switch (kind) {
    case WorkloadKind::ShiftBench:
        if (shift_count == 0)
            throw ConfigError("shift_bench needs at least one shift");
        break;
    case WorkloadKind::TraceFile:
        if (trace_path.empty())
            throw ConfigError("trace workload needs a trace file");
        break;
    case WorkloadKind::Kernel: break;
    case WorkloadKind::Reliability:
        if (trials == 0 || levels.empty())
            throw ConfigError("reliability workload needs levels and at least one trial");
        for (double l : levels)
            if (!(l >= 0.0 && l <= 0.5))
                throw ConfigError(fmt::format("variation level {} outside [0, 0.5]", l));
        break;
    case WorkloadKind::Capacitor:
        if (!(cap_fF > 0.0) || !(cap_dielectric_nm > 0.0) || !(cap_eps_r > 0.0))
            throw ConfigError("capacitor parameters must be positive");
        break;
    }
}

} // namespace migshift
