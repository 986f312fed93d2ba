#pragma once

#include "migshift/command.hpp"
#include "migshift/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace migshift {

/// DDR3-1333 timing (ns unless noted) plus the calibrated PIM composites.
struct TimingParams {
    double tRCD = 13.5;
    double tRP = 13.5;
    double tRAS = 36.0;
    double tRC = 49.5;
    double tREFI_us = 7.8;
    double tRFC = 260.0;          ///< refresh stall, used only in blocking mode
    double t_aap = 51.9;          ///< one RowClone (ACT-ACT-PRE)
    double t_shift_setup = 1.1;   ///< charged once, before the first shift of a run
    double t_tra = 49.5;          ///< ACT(TRA)-PRE
    double t_burst = 6.0;         ///< one RD/WR burst (BL8 at 667 MHz)

    /// Throws ConfigError unless every value is positive and tRC == tRAS + tRP.
    void validate() const;

    friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

enum class RefreshMode : std::uint8_t {
    EnergyOnly,   ///< refresh costs energy but never delays commands
    Blocking,     ///< every elapsed tREFI stalls the bank for tRFC
};

/// How refresh events are counted for a run.
struct RefreshModel {
    bool enabled = true;
    RefreshMode mode = RefreshMode::EnergyOnly;
    /// Count the partial final interval as a fractional event, rounded
    /// down to a multiple of `quantum` intervals. Off: whole intervals only.
    bool prorate = true;
    double quantum = 0.5;

    friend bool operator==(const RefreshModel&, const RefreshModel&) = default;
};

/// Energy calibration (nJ unless noted).
struct EnergyParams {
    double e_aap_active = 7.56;       ///< per AAP event
    double e_shift_overhead = 1.081;  ///< once per run containing a shift
    double e_ref_event = 77.1171;     ///< per refresh event per active bank
    double e_tra_active = 7.56;       ///< per TRA event
    double e_act = 3.78;              ///< per standalone ACT
    double e_pre = 0.0;               ///< per standalone PRE
    double e_burst_per_64B = 10.0;    ///< per RD/WR burst
    double p_standby_nW = 0.0;        ///< background power per active bank
    double transfer_low = 10.0;       ///< host transfer estimate, per 64 B
    double transfer_high = 15.0;
    RefreshModel refresh{};

    /// Throws ConfigError on negative values or transfer_low > transfer_high.
    void validate() const;

    friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

/// Energy categories of one bank.
struct BankEnergy {
    double active = 0.0;
    double burst = 0.0;
    double refresh = 0.0;
    double precharge = 0.0;
    double standby = 0.0;
    std::array<std::size_t, 6> event_counts{};   ///< indexed by EventKind
    double refresh_events = 0.0;

    double total() const noexcept { return active + burst + refresh + precharge + standby; }
    std::size_t count(EventKind k) const noexcept { return event_counts[static_cast<std::size_t>(k)]; }
    BankEnergy& operator+=(const BankEnergy& o);
};

struct EnergyLedger {
    std::map<std::uint32_t, BankEnergy> banks;   ///< flat bank index -> categories

    BankEnergy sum() const;
    double total() const { return sum().total(); }
};

struct RunStats {
    double total_time_ns = 0.0;
    std::size_t shifts_executed = 0;
    double latency_per_shift_ns = 0.0;
    double throughput_mops = 0.0;
    double energy_per_shift_nj = 0.0;
    double energy_per_kb_nj = 0.0;
};

struct CostResult {
    EnergyLedger ledger;
    RunStats stats;
    std::vector<double> issue_ns;   ///< start time of each event, same order as the report
};

/// Places every event on its bank's serial timeline and charges energy.
/// Banks run in parallel; the run ends when the last bank finishes.
CostResult cost_trace(const ExecutionReport& events, const TimingParams& timing,
                      const EnergyParams& energy, const DramGeometry& geometry);

/// Energy of moving `bytes` to the host and back as 64-byte transfers:
/// (low, high) per the transfer estimate, doubled when the data is written back.
std::pair<double, double> baseline_movement_energy(std::uint64_t bytes, const EnergyParams& energy,
                                                   bool with_writeback = false);

/// Independent banks scale throughput linearly.
double aggregate_throughput(double per_bank_mops, std::uint32_t banks);

} // namespace migshift
