#include "migshift/command.hpp"

#include <algorithm>

namespace migshift {

std::string_view to_string(CommandKind k)
{
    switch (k) {
    case CommandKind::Act: return "ACT";
    case CommandKind::Pre: return "PRE";
    case CommandKind::Rd: return "RD";
    case CommandKind::Wr: return "WR";
    case CommandKind::Aap: return "AAP";
    case CommandKind::Dra: return "DRA";
    case CommandKind::Tra: return "TRA";
    case CommandKind::NotXsub: return "NOT_XSUB";
    case CommandKind::ShiftLeft: return "SHIFT_LEFT";
    case CommandKind::ShiftRight: return "SHIFT_RIGHT";
    }
    return "?";
}

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::Act: return "ACT";
    case EventKind::Pre: return "PRE";
    case EventKind::Rd: return "RD";
    case EventKind::Wr: return "WR";
    case EventKind::Aap: return "AAP";
    case EventKind::Tra: return "TRA";
    }
    return "?";
}

std::size_t expected_arity(CommandKind k)
{
    switch (k) {
    case CommandKind::Act:
    case CommandKind::Pre:
    case CommandKind::Rd:
    case CommandKind::Wr:
        return 1;
    case CommandKind::Dra:
    case CommandKind::Tra:
        return 3;
    default:
        return 2;
    }
}

std::size_t ExecutionReport::count(EventKind k) const
{
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [k](const CommandEvent& e) { return e.kind == k; }));
}

std::size_t ExecutionReport::commands_of(CommandKind k) const
{
    std::size_t n = 0;
    bool first = true;
    std::size_t last = 0;
    for (const auto& e : events) {
        if (e.origin != k)
            continue;
        if (first || e.command_index != last)
            ++n;
        first = false;
        last = e.command_index;
    }
    return n;
}

void ExecutionReport::append(const ExecutionReport& other)
{
    const std::size_t offset = commands_executed;
    for (auto e : other.events) {
        e.command_index += offset;
        events.push_back(e);
    }
    commands_executed += other.commands_executed;
}

} // namespace migshift
