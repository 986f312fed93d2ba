#include "migshift/trace_io.hpp"

#include "migshift/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace migshift {

namespace {

struct Mnemonic {
    std::string_view text;
    CommandKind kind;
};

constexpr Mnemonic kMnemonics[] = {
    {"ACT", CommandKind::Act},         {"PRE", CommandKind::Pre},
    {"RD", CommandKind::Rd},           {"WR", CommandKind::Wr},
    {"AAP", CommandKind::Aap},         {"DRA", CommandKind::Dra},
    {"TRA", CommandKind::Tra},         {"NOTX", CommandKind::NotXsub},
    {"SHL", CommandKind::ShiftLeft},   {"SHR", CommandKind::ShiftRight},
};

std::string_view mnemonic(CommandKind k)
{
    for (const auto& m : kMnemonics)
        if (m.kind == k)
            return m.text;
    return "?";
}

class LineParser {
public:
    LineParser(std::size_t line_no, std::vector<std::string> tokens)
        : m_line(line_no), m_tokens(std::move(tokens)) {}

    [[noreturn]] void fail(const std::string& msg) const { throw TraceParseError(m_line, msg); }

    bool done() const { return m_pos >= m_tokens.size(); }

    const std::string& peek() const
    {
        if (done())
            fail("unexpected end of line");
        return m_tokens[m_pos];
    }

    std::string next()
    {
        const auto& t = peek();
        ++m_pos;
        return t;
    }

    std::uint32_t number(std::string_view tok, std::size_t prefix_len) const
    {
        std::uint32_t v = 0;
        const char* b = tok.data() + prefix_len;
        const char* e = tok.data() + tok.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (b == e || ec != std::errc{} || p != e)
            fail(fmt::format("bad numeric token '{}'", tok));
        return v;
    }

    std::uint32_t prefixed(std::string_view prefix)
    {
        const std::string tok = next();
        if (tok.rfind(prefix, 0) != 0)
            fail(fmt::format("expected {}<n>, got '{}'", prefix, tok));
        return number(tok, prefix.size());
    }

    bool optional_prefixed(std::string_view prefix, std::uint32_t& out)
    {
        if (done() || m_tokens[m_pos].rfind(prefix, 0) != 0)
            return false;
        out = prefixed(prefix);
        return true;
    }

    RowRef row()
    {
        const std::string tok = next();
        if (tok == "top.A") return RowRef::top(Port::A);
        if (tok == "top.B") return RowRef::top(Port::B);
        if (tok == "bot.A") return RowRef::bottom(Port::A);
        if (tok == "bot.B") return RowRef::bottom(Port::B);
        if (tok.size() < 2 || tok[0] != 'r')
            fail(fmt::format("expected a row (rN, top.A/B, bot.A/B), got '{}'", tok));
        return RowRef::data(number(tok, 1));
    }

    /// [chC] [rkK] bB
    RowAddress bank_prefix()
    {
        RowAddress a;
        optional_prefixed("ch", a.channel);
        optional_prefixed("rk", a.rank);
        a.bank = prefixed("b");
        return a;
    }

private:
    std::size_t m_line;
    std::vector<std::string> m_tokens;
    std::size_t m_pos = 0;
};

Command parse_line(LineParser& p)
{
    const std::string op = p.next();
    const Mnemonic* found = nullptr;
    for (const auto& m : kMnemonics)
        if (m.text == op)
            found = &m;
    if (!found)
        p.fail(fmt::format("unknown command '{}'", op));

    Command cmd;
    cmd.kind = found->kind;
    const RowAddress base = p.bank_prefix();
    auto at = [&](std::uint32_t sub, RowRef r) {
        RowAddress a = base;
        a.subarray = sub;
        a.row = r;
        return a;
    };

    switch (cmd.kind) {
    case CommandKind::Pre:
    case CommandKind::Rd:
    case CommandKind::Wr:
        cmd.operands = {base};
        break;
    case CommandKind::NotXsub: {
        const auto s1 = p.prefixed("s");
        const auto r1 = p.row();
        const auto s2 = p.prefixed("s");
        const auto r2 = p.row();
        cmd.operands = {at(s1, r1), at(s2, r2)};
        break;
    }
    default: {
        const auto sub = p.prefixed("s");
        for (std::size_t i = 0; i < expected_arity(cmd.kind); ++i)
            cmd.operands.push_back(at(sub, p.row()));
        break;
    }
    }
    if (!p.done())
        p.fail(fmt::format("trailing token '{}'", p.peek()));
    return cmd;
}

} // namespace

CommandTrace parse_trace(std::istream& in, std::string label)
{
    CommandTrace trace;
    trace.label = std::move(label);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            const std::string comment = line.substr(hash + 1);
            constexpr std::string_view tag = " trace: ";
            if (trace.commands.empty() && comment.rfind(tag, 0) == 0)
                trace.label = comment.substr(tag.size());
            line.resize(hash);
        }
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;)
            tokens.push_back(t);
        if (tokens.empty())
            continue;
        LineParser p(line_no, std::move(tokens));
        trace.commands.push_back(parse_line(p));
    }
    return trace;
}

CommandTrace parse_trace_text(std::string_view text, std::string label)
{
    std::istringstream in{std::string(text)};
    return parse_trace(in, std::move(label));
}

CommandTrace load_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw TraceParseError(0, "cannot open trace file " + path);
    return parse_trace(in, path);
}

std::string format_command(const Command& cmd)
{
    if (cmd.operands.size() != expected_arity(cmd.kind))
        throw ProtocolError(fmt::format("{} with {} operands cannot be formatted",
                                        to_string(cmd.kind), cmd.operands.size()));
    const auto& o = cmd.operands;
    std::string out{mnemonic(cmd.kind)};
    if (o[0].channel != 0 || o[0].rank != 0)
        out += fmt::format(" ch{} rk{}", o[0].channel, o[0].rank);
    out += fmt::format(" b{}", o[0].bank);

    switch (cmd.kind) {
    case CommandKind::Pre:
    case CommandKind::Rd:
    case CommandKind::Wr:
        break;
    case CommandKind::NotXsub:
        out += fmt::format(" s{} {} s{} {}", o[0].subarray, to_string(o[0].row), o[1].subarray,
                           to_string(o[1].row));
        break;
    default:
        out += fmt::format(" s{}", o[0].subarray);
        for (const auto& a : o)
            out += " " + to_string(a.row);
        break;
    }
    return out;
}

std::string format_trace(const CommandTrace& trace)
{
    std::string out;
    if (!trace.label.empty())
        out += "# trace: " + trace.label + "\n";
    for (const auto& c : trace.commands) {
        out += format_command(c);
        out += '\n';
    }
    return out;
}

} // namespace migshift
