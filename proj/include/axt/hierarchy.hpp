#pragma once

#include "axt/netlist.hpp"

#include <map>
#include <string>
#include <vector>

namespace axt {

// Reserved net names usable in bindings to tie an input port bit to a constant.
inline constexpr const char* kTie0 = "1'b0";
inline constexpr const char* kTie1 = "1'b1";

struct PortDecl {
    std::string name;
    std::size_t width = 1;
};

// Connects a child port to nets of the parent scope, LSB first. Parent port
// bits are named "<port>[<i>]"; any other name is a local wire.
struct Binding {
    std::string port;
    std::vector<std::string> nets;
};

struct InstanceDecl {
    std::string name;
    std::string module;
    InstanceInfo info;
    std::vector<Binding> bindings;
};

struct CompositeModule {
    std::string name;
    std::vector<PortDecl> inputs;
    std::vector<PortDecl> outputs;
    std::vector<InstanceDecl> instances;
};

// Leaves are flat netlists whose input/output words act as ports.
struct Design {
    std::map<std::string, Netlist> leaves;
    std::map<std::string, CompositeModule> composites;
    std::string top;
};

// "<port>[<i>]" helper shared by generators and tests.
std::string bit_name(const std::string& port, std::size_t i);
std::vector<std::string> bus(const std::string& name, std::size_t width);

// Flattens `design` into one netlist. Every gate is tagged with the
// hierarchical path of its leaf instance ("top.add0"); the instance table
// records each leaf instance. Throws PortMismatch or UnknownModule.
Netlist flatten(const Design& design);

}  // namespace axt
