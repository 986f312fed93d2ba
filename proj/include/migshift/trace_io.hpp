#pragma once

#include "migshift/command.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace migshift {

// Command-trace text format, one command per line:
//
//   AAP  [chC] [rkK] bB sS <row> <row>
//   DRA  [chC] [rkK] bB sS rSRC rD1 rD2
//   TRA  [chC] [rkK] bB sS rA rB rC
//   SHR  [chC] [rkK] bB sS rSRC rDST
//   SHL  [chC] [rkK] bB sS rSRC rDST
//   NOTX [chC] [rkK] bB sSRC rSRC sDST rDST
//   ACT  [chC] [rkK] bB sS rROW
//   PRE | RD | WR [chC] [rkK] bB
//   # comment            (a leading "# trace: NAME" sets the label)
//
// <row> is rN for a data row or top.A, top.B, bot.A, bot.B for a
// migration row accessed through the given port. Channel and rank
// default to 0.

CommandTrace parse_trace(std::istream& in, std::string label = {});
CommandTrace parse_trace_text(std::string_view text, std::string label = {});
CommandTrace load_trace(const std::string& path);

std::string format_command(const Command& cmd);
std::string format_trace(const CommandTrace& trace);

} // namespace migshift
