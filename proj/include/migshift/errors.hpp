#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace migshift {

/// Invalid geometry, timing, energy or config-file content.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A row address that does not exist or is not legal for the command.
class AddressError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A command issued in the wrong bank state (e.g. AAP while a row is open).
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-physical device parameters (zero or negative capacitance, ...).
class ParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed line in a command-trace file.
class TraceParseError : public std::runtime_error {
public:
    TraceParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), m_line(line) {}

    std::size_t line() const noexcept { return m_line; }

private:
    std::size_t m_line;
};

/// Wraps the first failing command of a trace together with its index.
class TraceError : public std::runtime_error {
public:
    enum class Cause { Address, Protocol };

    TraceError(std::size_t index, Cause cause, const std::string& what)
        : std::runtime_error("command " + std::to_string(index) + ": " + what),
          m_index(index), m_cause(cause) {}

    std::size_t index() const noexcept { return m_index; }
    Cause cause() const noexcept { return m_cause; }

private:
    std::size_t m_index;
    Cause m_cause;
};

} // namespace migshift
