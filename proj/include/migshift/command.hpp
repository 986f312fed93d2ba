#pragma once

#include "migshift/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace migshift {

enum class CommandKind : std::uint8_t {
    Act,
    Pre,
    Rd,
    Wr,
    Aap,        ///< RowClone copy: ACT src, ACT dst, PRE
    Dra,        ///< RowClone into two destinations at once
    Tra,        ///< triple-row activate: all three rows become MAJ
    NotXsub,    ///< copy across the shared stripe into the adjacent subarray (inverts)
    ShiftLeft,  ///< dst[i] = src[i+1]
    ShiftRight, ///< dst[i+1] = src[i]
};

std::string_view to_string(CommandKind k);

/// Operand layout per kind:
///   ACT r | PRE bank | RD/WR bank | AAP src dst | DRA src d1 d2 |
///   TRA a b c | NOT_XSUB src dst | SHIFT_* src dst
struct Command {
    CommandKind kind = CommandKind::Aap;
    std::vector<RowAddress> operands;

    static Command act(RowAddress row) { return {CommandKind::Act, {row}}; }
    static Command pre(RowAddress bank) { return {CommandKind::Pre, {bank}}; }
    static Command rd(RowAddress bank) { return {CommandKind::Rd, {bank}}; }
    static Command wr(RowAddress bank) { return {CommandKind::Wr, {bank}}; }
    static Command aap(RowAddress src, RowAddress dst) { return {CommandKind::Aap, {src, dst}}; }
    static Command dra(RowAddress src, RowAddress d1, RowAddress d2)
    {
        return {CommandKind::Dra, {src, d1, d2}};
    }
    static Command tra(RowAddress a, RowAddress b, RowAddress c) { return {CommandKind::Tra, {a, b, c}}; }
    static Command not_xsub(RowAddress src, RowAddress dst) { return {CommandKind::NotXsub, {src, dst}}; }
    static Command shift_left(RowAddress src, RowAddress dst) { return {CommandKind::ShiftLeft, {src, dst}}; }
    static Command shift_right(RowAddress src, RowAddress dst) { return {CommandKind::ShiftRight, {src, dst}}; }

    friend bool operator==(const Command&, const Command&) = default;
};

std::size_t expected_arity(CommandKind k);

struct CommandTrace {
    std::string label;
    std::vector<Command> commands;

    void push(Command c) { commands.push_back(std::move(c)); }
    std::size_t size() const noexcept { return commands.size(); }
    bool empty() const noexcept { return commands.empty(); }

    friend bool operator==(const CommandTrace&, const CommandTrace&) = default;
};

/// Primitive costed unit. SHIFT_* expands into four Aap events, NOT_XSUB and
/// DRA into one Aap event each.
enum class EventKind : std::uint8_t { Act, Pre, Rd, Wr, Aap, Tra };

std::string_view to_string(EventKind k);

struct CommandEvent {
    EventKind kind = EventKind::Aap;
    std::uint32_t bank = 0;        ///< flat bank index
    std::uint32_t rank = 0;        ///< flat rank index
    std::size_t command_index = 0;
    CommandKind origin = CommandKind::Aap;

    friend bool operator==(const CommandEvent&, const CommandEvent&) = default;
};

struct ExecutionReport {
    std::vector<CommandEvent> events;
    std::size_t commands_executed = 0;

    std::size_t count(EventKind k) const;
    /// Number of commands of kind `k` that produced at least one event.
    std::size_t commands_of(CommandKind k) const;
    std::size_t shifts() const { return commands_of(CommandKind::ShiftLeft) + commands_of(CommandKind::ShiftRight); }

    /// Appends another report, renumbering its command indices.
    void append(const ExecutionReport& other);
};

} // namespace migshift
