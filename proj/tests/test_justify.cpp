#include "doctest.h"

#include "axt/errors.hpp"
#include "axt/justify.hpp"
#include "axt/netlist_io.hpp"

using namespace axt;

namespace {

const char* kSmall = R"(
input a0
input a1
input b0
word a a0 a1
word b b0
gate g0 AND x a0 a1
gate g1 OR y x b0
gate g2 CONST0 z
gate g3 AND w z a0
gate g4 XOR v a0 a0
output y
output w
output v
)";

}  // namespace

TEST_CASE("word_support and constant_nets")
{
    auto nl = parse_netlist(kSmall);
    auto sup = word_support(nl);
    CHECK(sup[*nl.find_net("x")] == 0b01);
    CHECK(sup[*nl.find_net("y")] == 0b11);
    CHECK(sup[*nl.find_net("z")] == 0);

    auto k = constant_nets(nl);
    CHECK(k[*nl.find_net("z")] == 0);
    CHECK(k[*nl.find_net("w")] == 0);
    CHECK(k[*nl.find_net("y")] == -1);
    CHECK(k[*nl.find_net("a0")] == -1);
    CHECK(k[*nl.find_net("v")] == -1);  // ternary evaluation does not see x ^ x
}

TEST_CASE("expand_literal follows forcing gates within the tag")
{
    NetlistBuilder b;
    NetId a = b.add_input("a"), c = b.add_input("c"), d = b.add_input("d");
    NetId na = b.net("na"), x = b.net("x"), y = b.net("y"), z = b.net("z");
    b.add_gate(GateKind::Not, {a}, na, "t");
    b.add_gate(GateKind::And, {na, c}, x, "t");
    b.add_gate(GateKind::Nor, {x, d}, y, "t");
    b.add_gate(GateKind::And, {a, na}, z, "t");
    b.add_output(y);
    b.add_output(z);
    b.add_instance("t", {});
    auto nl = b.build();

    // y = 0 is not forcing for NOR: stays as is.
    auto e0 = expand_literal(nl, {y, false}, "t");
    REQUIRE(e0);
    CHECK(*e0 == std::vector<Literal>{{y, false}});
    // y = 1 forces x = 0 and d = 0; x = 0 is not forcing for AND.
    auto e1 = expand_literal(nl, {y, true}, "t");
    REQUIRE(e1);
    CHECK(std::find(e1->begin(), e1->end(), Literal{d, false}) != e1->end());
    CHECK(std::find(e1->begin(), e1->end(), Literal{x, false}) != e1->end());
    // x = 1 forces a = 0 and c = 1.
    auto ex = expand_literal(nl, {x, true}, "t");
    REQUIRE(ex);
    CHECK(std::find(ex->begin(), ex->end(), Literal{a, false}) != ex->end());
    CHECK(std::find(ex->begin(), ex->end(), Literal{c, true}) != ex->end());
    // z = a & ~a = 1 is contradictory.
    CHECK_FALSE(expand_literal(nl, {z, true}, "t"));
    // A different tag stops the walk.
    auto other = expand_literal(nl, {x, true}, "u");
    REQUIRE(other);
    CHECK(*other == std::vector<Literal>{{x, true}});
}

TEST_CASE("justify: exhaustive and seeded search")
{
    // Small input space: exhaustive.
    auto nl = parse_netlist(kSmall);
    Simulator sim(nl);
    VectorSet seeds = VectorSet::for_netlist(nl);
    seeds.push_back(std::vector<std::uint64_t>{0, 0});
    Traces tr = sim.run(seeds);
    auto w = justify(sim, seeds, tr, {{*nl.find_net("x"), true}, {*nl.find_net("b0"), false}}, {});
    REQUIRE(w);
    CHECK((*w)[0] == 3);
    CHECK((*w)[1] == 0);
    CHECK_FALSE(justify(sim, seeds, tr, {{*nl.find_net("w"), true}}, {}));

    // Three 16-bit words, each literal an all-ones detector on its own word:
    // crossover of seed rows that realized each literal separately.
    NetlistBuilder b;
    std::vector<NetId> hits;
    for (int w2 = 0; w2 < 3; ++w2) {
        std::vector<NetId> bits;
        const std::string name = "w" + std::to_string(w2);
        for (int i = 0; i < 16; ++i) bits.push_back(b.add_input(name + "_" + std::to_string(i)));
        b.add_word(name, bits);
        NetId h = b.net("all" + std::to_string(w2));
        b.add_gate(GateKind::And, bits, h);
        b.add_output(h);
        hits.push_back(h);
    }
    auto wide = b.build();
    Simulator ws(wide);
    VectorSet rows = VectorSet::for_netlist(wide);
    rows.push_back(std::vector<std::uint64_t>{0xFFFF, 1, 2});
    rows.push_back(std::vector<std::uint64_t>{3, 0xFFFF, 4});
    rows.push_back(std::vector<std::uint64_t>{5, 6, 0xFFFF});
    Traces wtr = ws.run(rows);
    std::vector<Literal> lits;
    for (NetId h : hits) lits.push_back({h, true});
    auto found = justify(ws, rows, wtr, lits, {1000, 1, 20});
    REQUIRE(found);
    CHECK(*found == std::vector<std::uint64_t>{0xFFFF, 0xFFFF, 0xFFFF});
}
