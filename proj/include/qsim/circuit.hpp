/// @file  circuit.hpp
/// @brief Text format for circuits and the benchmark generators

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qsim/gate.hpp"

namespace qsim {

/// Parse failure with a 1-based source position.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string &message);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }
  [[nodiscard]] const std::string &message() const noexcept { return message_; }

private:
  std::size_t line_, column_;
  std::string message_;
};

inline constexpr std::size_t kMaxQubits = std::size_t{1} << 24;

/// Line-oriented format:
///   # comment
///   .qubits N            first directive
///   .init BITS           optional, before any gate
///   h 0 / cx 0 1 / ccx c1 [c2 ...] t / fredkin [c ...] t1 t2 / ...
///   .measure i j ...     optional, last
[[nodiscard]] Circuit parse_circuit(std::string_view text);
[[nodiscard]] std::string serialize_circuit(const Circuit &circuit);

/// n H gates followed by 3n gates drawn uniformly from
/// {x, y, z, h, s, t, cx, cz, ccx, fredkin} on distinct random qubits.
/// For n = 2 the three-qubit gates are left out of the pool.
[[nodiscard]] Circuit gen_random(std::size_t n, std::uint64_t seed);
/// H on qubit 0 and a CNOT chain; measures every qubit.
[[nodiscard]] Circuit gen_ghz(std::size_t n);
/// Bernstein–Vazirani on n−1 data qubits and one ancilla (qubit n−1). The
/// hidden string defaults to all ones.
[[nodiscard]] Circuit gen_bv(std::size_t n, std::optional<std::string> hidden = std::nullopt);

} // namespace qsim
