#include "migshift/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <sstream>

namespace migshift {

namespace {

nlohmann::ordered_json to_json(const Report::Value& v)
{
    return std::visit(
        [](const auto& x) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
                // Rounded so the document is stable against last-ulp noise.
                return std::round(x * 1e9) / 1e9;
            else
                return x;
        },
        v);
}

nlohmann::ordered_json& node_at(nlohmann::ordered_json& root, const std::string& dotted)
{
    nlohmann::ordered_json* cur = &root;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!cur->is_object())
            *cur = nlohmann::ordered_json::object();
        cur = &(*cur)[part];
        if (dot == std::string::npos)
            return *cur;
        start = dot + 1;
    }
}

} // namespace

std::string format_double(double v)
{
    if (v == 0.0)
        v = 0.0;   // no "-0.000000"
    return fmt::format("{:.6f}", v);
}

void Report::add_value(std::string key, Value value)
{
    node_at(m_doc, key) = to_json(value);
    m_entries.emplace_back(std::move(key), std::move(value));
}

void Report::attach(const std::string& key, nlohmann::ordered_json doc)
{
    node_at(m_doc, key) = std::move(doc);
}

std::string Report::text() const
{
    std::string out;
    for (const auto& [key, value] : m_entries) {
        const std::string rendered = std::visit(
            [](const auto& x) -> std::string {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>)
                    return format_double(x);
                else if constexpr (std::is_same_v<T, bool>)
                    return x ? "true" : "false";
                else if constexpr (std::is_same_v<T, std::string>)
                    return x;
                else
                    return fmt::format("{}", x);
            },
            value);
        out += key + "=" + rendered + "\n";
    }
    return out;
}

std::string Report::json() const
{
    return m_doc.dump(2) + "\n";
}

nlohmann::ordered_json config_to_json(const SimConfig& cfg)
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    std::istringstream in(serialize_config(cfg));
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find(" = ");
        const std::string value = line.substr(eq + 3);
        auto parsed = nlohmann::ordered_json::parse(value, nullptr, false);
        if (parsed.is_discarded() || parsed.is_string())
            node_at(doc, line.substr(0, eq)) = value;
        else
            node_at(doc, line.substr(0, eq)) = std::move(parsed);
    }
    return doc;
}

void add_ledger(Report& r, const std::string& prefix, const EnergyLedger& ledger)
{
    const BankEnergy s = ledger.sum();
    r.add(prefix + ".active_nJ", s.active);
    r.add(prefix + ".burst_nJ", s.burst);
    r.add(prefix + ".refresh_nJ", s.refresh);
    r.add(prefix + ".precharge_nJ", s.precharge);
    r.add(prefix + ".standby_nJ", s.standby);
    r.add(prefix + ".total_nJ", s.total());
    r.add(prefix + ".refresh_events", s.refresh_events);
    r.add(prefix + ".banks_active", ledger.banks.size());
    for (std::size_t k = 0; k < s.event_counts.size(); ++k)
        r.add(fmt::format("{}.events.{}", prefix, to_string(static_cast<EventKind>(k))), s.event_counts[k]);
}

void add_stats(Report& r, const std::string& prefix, const RunStats& stats)
{
    r.add(prefix + ".total_time_ns", stats.total_time_ns);
    r.add(prefix + ".shifts_executed", stats.shifts_executed);
    r.add(prefix + ".latency_per_shift_ns", stats.latency_per_shift_ns);
    r.add(prefix + ".throughput_mops", stats.throughput_mops);
    r.add(prefix + ".energy_per_shift_nJ", stats.energy_per_shift_nj);
    r.add(prefix + ".energy_per_kb_nJ", stats.energy_per_kb_nj);
}

} // namespace migshift
