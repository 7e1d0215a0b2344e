#pragma once

#include <string>

#include "qest/circuit.hpp"

namespace qest {

/// Parse the supported OPENQASM 2.0 subset: one qreg, optional creg,
/// u3/rx/ry/rz/h/x/cx statements, measure accepted and dropped.
/// Throws ParseError with line/column on bad input.
Circuit parse_qasm(const std::string& text);

/// Serialize a circuit; output reparses to an identical circuit.
std::string emit_qasm(const Circuit& c);

Circuit parse_qasm_file(const std::string& path);
void write_qasm_file(const Circuit& c, const std::string& path);

}  // namespace qest
