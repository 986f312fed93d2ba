#pragma once

#include "migshift/config.hpp"
#include "migshift/timing_energy.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace migshift {

/// Ordered set of dotted keys rendered both as `key=value` lines and as a
/// nested JSON document. Output is a pure function of the inserted values.
class Report {
public:
    using Value = std::variant<std::string, std::int64_t, std::uint64_t, double, bool>;

    void add_value(std::string key, Value value);

    template <typename T>
    void add(std::string key, const T& value)
    {
        if constexpr (std::is_same_v<T, bool>)
            add_value(std::move(key), value);
        else if constexpr (std::is_floating_point_v<T>)
            add_value(std::move(key), static_cast<double>(value));
        else if constexpr (std::is_integral_v<T> && std::is_signed_v<T>)
            add_value(std::move(key), static_cast<std::int64_t>(value));
        else if constexpr (std::is_integral_v<T>)
            add_value(std::move(key), static_cast<std::uint64_t>(value));
        else
            add_value(std::move(key), std::string(value));
    }

    /// Attaches a subtree to the JSON document only (e.g. the config echo).
    void attach(const std::string& key, nlohmann::ordered_json doc);

    std::string text() const;
    std::string json() const;
    const nlohmann::ordered_json& document() const { return m_doc; }
    const std::vector<std::pair<std::string, Value>>& entries() const { return m_entries; }

private:
    std::vector<std::pair<std::string, Value>> m_entries;
    nlohmann::ordered_json m_doc = nlohmann::ordered_json::object();
};

/// Fixed-precision rendering used in text reports.
std::string format_double(double v);

nlohmann::ordered_json config_to_json(const SimConfig& cfg);

void add_ledger(Report& r, const std::string& prefix, const EnergyLedger& ledger);
void add_stats(Report& r, const std::string& prefix, const RunStats& stats);

} // namespace migshift
