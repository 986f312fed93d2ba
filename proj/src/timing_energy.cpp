#include "migshift/timing_energy.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace migshift {

void TimingParams::validate() const
{
    for (double v : {tRCD, tRP, tRAS, tRC, tREFI_us, tRFC, t_aap, t_tra, t_burst})
        if (!(v > 0.0))
            throw ConfigError("timing parameters must be positive");
    if (t_shift_setup < 0.0)
        throw ConfigError("t_shift_setup must be non-negative");
    if (std::abs(tRC - (tRAS + tRP)) > 1e-9)
        throw ConfigError(fmt::format("tRC ({}) must equal tRAS + tRP ({})", tRC, tRAS + tRP));
}

void EnergyParams::validate() const
{
    for (double v : {e_aap_active, e_shift_overhead, e_ref_event, e_tra_active, e_act, e_pre,
                     e_burst_per_64B, p_standby_nW, transfer_low, transfer_high})
        if (v < 0.0)
            throw ConfigError("energy parameters must be non-negative");
    if (!(refresh.quantum > 0.0) || refresh.quantum > 1.0)
        throw ConfigError("refresh.quantum must be in (0, 1]");
    if (transfer_low > transfer_high)
        throw ConfigError("transfer_low exceeds transfer_high");
}

BankEnergy& BankEnergy::operator+=(const BankEnergy& o)
{
    active += o.active;
    burst += o.burst;
    refresh += o.refresh;
    precharge += o.precharge;
    standby += o.standby;
    refresh_events += o.refresh_events;
    for (std::size_t i = 0; i < event_counts.size(); ++i)
        event_counts[i] += o.event_counts[i];
    return *this;
}

BankEnergy EnergyLedger::sum() const
{
    BankEnergy s;
    for (const auto& [id, b] : banks)
        s += b;
    return s;
}

CostResult cost_trace(const ExecutionReport& events, const TimingParams& timing,
                      const EnergyParams& energy, const DramGeometry& geometry)
{
    CostResult out;
    out.issue_ns.reserve(events.events.size());

    struct Timeline {
        double cursor = 0.0;
        double next_refresh = 0.0;
        std::size_t stalls = 0;
    };
    std::map<std::uint32_t, Timeline> timelines;
    const double trefi_ns = timing.tREFI_us * 1000.0;
    const bool blocking = energy.refresh.enabled && energy.refresh.mode == RefreshMode::Blocking;
    bool setup_charged = false;

    for (const auto& ev : events.events) {
        auto [it, fresh] = timelines.try_emplace(ev.bank);
        Timeline& tl = it->second;
        if (fresh)
            tl.next_refresh = trefi_ns;
        BankEnergy& led = out.ledger.banks[ev.bank];

        const bool is_shift = ev.origin == CommandKind::ShiftLeft || ev.origin == CommandKind::ShiftRight;
        if (is_shift && !setup_charged) {
            tl.cursor += timing.t_shift_setup;
            led.standby += energy.e_shift_overhead;
            setup_charged = true;
        }
        while (blocking && tl.cursor >= tl.next_refresh) {
            tl.cursor += timing.tRFC;
            tl.next_refresh += trefi_ns;
            ++tl.stalls;
        }

        double duration = 0.0;
        switch (ev.kind) {
        case EventKind::Aap:
            duration = timing.t_aap;
            led.active += energy.e_aap_active;
            break;
        case EventKind::Tra:
            duration = timing.t_tra;
            led.active += energy.e_tra_active;
            break;
        case EventKind::Act:
            duration = timing.tRAS;
            led.active += energy.e_act;
            break;
        case EventKind::Pre:
            duration = timing.tRP;
            led.precharge += energy.e_pre;
            break;
        case EventKind::Rd:
        case EventKind::Wr:
            duration = timing.t_burst;
            led.burst += energy.e_burst_per_64B;
            break;
        }
        ++led.event_counts[static_cast<std::size_t>(ev.kind)];
        out.issue_ns.push_back(tl.cursor);
        tl.cursor += duration;
    }

    double elapsed = 0.0;
    for (const auto& [id, tl] : timelines)
        elapsed = std::max(elapsed, tl.cursor);
    if (!events.events.empty() && !(elapsed > 0.0))
        throw std::logic_error("cost_trace: non-empty run with zero duration");

    for (auto& [id, led] : out.ledger.banks) {
        if (energy.refresh.enabled) {
            const double intervals = elapsed / trefi_ns;
            const double q = energy.refresh.prorate ? energy.refresh.quantum : 1.0;
            led.refresh_events = std::floor(intervals / q) * q;
            led.refresh += led.refresh_events * energy.e_ref_event;
        }
        led.standby += energy.p_standby_nW * elapsed * 1e-9;
    }

    RunStats& s = out.stats;
    s.total_time_ns = elapsed;
    s.shifts_executed = events.shifts();
    if (s.shifts_executed > 0) {
        const double n = static_cast<double>(s.shifts_executed);
        s.latency_per_shift_ns = elapsed / n;
        s.throughput_mops = n / elapsed * 1e3;
        s.energy_per_shift_nj = out.ledger.total() / n;
        s.energy_per_kb_nj = s.energy_per_shift_nj / geometry.row_kilobytes();
    }
    return out;
}

std::pair<double, double> baseline_movement_energy(std::uint64_t bytes, const EnergyParams& energy,
                                                   bool with_writeback)
{
    if (bytes == 0)
        throw std::invalid_argument("baseline_movement_energy: bytes must be positive");
    const double transfers = static_cast<double>((bytes + 63) / 64);
    const double factor = with_writeback ? 2.0 : 1.0;
    return {transfers * energy.transfer_low * factor, transfers * energy.transfer_high * factor};
}

double aggregate_throughput(double per_bank_mops, std::uint32_t banks)
{
    if (banks == 0)
        throw std::invalid_argument("aggregate_throughput: banks must be at least 1");
    return per_bank_mops * banks;
}

} // namespace migshift
