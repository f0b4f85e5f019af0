#pragma once

#include "axt/netlist.hpp"

#include <string>
#include <string_view>

namespace axt {

// Line format, '#' starts a comment:
//   input <name> | output <name> | word <name> <bit0> <bit1>... (LSB first)
//   gate <id> <KIND> <out_net> <in_net>... | tag <gate_id> <instance_tag>
//   inst <tag> <approximate|deterministic> <op_type> <arch_id>
// Throws SyntaxError (with line number) or SemanticError.
Netlist parse_netlist(std::string_view text);

// Deterministic: inputs, outputs, words, gates in id order, tags, insts.
std::string serialize_netlist(const Netlist& netlist);

Netlist read_netlist_file(const std::string& path);
void write_netlist_file(const std::string& path, const Netlist& netlist);

}  // namespace axt
