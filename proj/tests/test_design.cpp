#include "doctest.h"

#include "axt/design.hpp"
#include "axt/errors.hpp"
#include "axt/justify.hpp"
#include "axt/sim.hpp"

using namespace axt;

namespace {

std::vector<std::uint64_t> run(const Netlist& nl, const std::vector<std::vector<std::uint64_t>>& rows)
{
    VectorSet vs = VectorSet::for_netlist(nl);
    for (const auto& r : rows) vs.push_back(r);
    return Simulator(nl).outputs(vs);
}

}  // namespace

TEST_CASE("FIR with all inputs one sums the coefficients")
{
    DesignConfig c;
    c.coeffs = {1, 2, 3, 4};
    auto nl = build_design(c);
    CHECK(run(nl, {{1, 1, 1, 1}})[0] == 10);
    CHECK(design_reference(c, std::vector<std::uint64_t>{1, 1, 1, 1}) == 10);
}

TEST_CASE("a zero coefficient makes its product constant zero")
{
    DesignConfig c;
    c.taps = 2;
    c.width = 4;
    c.coeffs = {0, 3};
    auto nl = build_design(c);
    auto cst = constant_nets(nl);
    int seen = 0;
    for (int i = 0; i < 8; ++i) {
        auto n = nl.find_net("fir.mul0_o[" + std::to_string(i) + "]");
        REQUIRE(n);
        CHECK(cst[*n] == 0);
        ++seen;
    }
    CHECK(seen == 8);
}

TEST_CASE("exact FIR designs match a direct sum exhaustively")
{
    struct Shape { int taps, width; std::vector<std::uint64_t> coeffs; };
    for (const auto& s : {Shape{2, 6, {0x3F, 0x21}}, Shape{4, 4, {0xF, 0x9, 0x1, 0x6}}, Shape{3, 5, {0x1F, 0x0, 0x11}}}) {
        DesignConfig c;
        c.taps = s.taps;
        c.width = s.width;
        c.coeffs = s.coeffs;
        auto nl = build_design(c);
        auto vs = exhaustive_stream(nl);
        auto out = Simulator(nl).outputs(vs);
        for (std::size_t t = 0; t < vs.size(); ++t) {
            std::uint64_t acc = 0;
            for (int i = 0; i < s.taps; ++i) acc += vs.value(t, i) * s.coeffs[i];
            REQUIRE(out[t] == acc);
        }
    }
}

TEST_CASE("FFT butterfly with unit twiddle gives sum and difference")
{
    DesignConfig c;
    c.design = DesignKind::FftButterfly;
    c.width = 4;
    c.twiddle = 1;
    auto nl = build_design(c);
    auto vs = exhaustive_stream(nl);
    REQUIRE(vs.size() == 256);
    auto out = Simulator(nl).outputs(vs);
    const int ow = 2 * c.width + 1;
    const std::uint64_t m = (std::uint64_t{1} << ow) - 1;
    for (std::size_t t = 0; t < vs.size(); ++t) {
        const std::uint64_t a = vs.value(t, 0), b = vs.value(t, 1);
        const std::uint64_t y0 = out[t] & m, y1 = out[t] >> ow;
        CHECK(y0 == a + b);
        CHECK(y1 == ((a - b) & m));
        // Low w+1 bits are the difference modulo 2^(w+1).
        CHECK((y1 & 0x1F) == ((a - b) & 0x1F));
    }
}

TEST_CASE("FFT butterfly matches its reference for a general twiddle")
{
    DesignConfig c;
    c.design = DesignKind::FftButterfly;
    c.width = 6;
    c.twiddle = 0x2B;
    auto nl = build_design(c);
    auto vs = exhaustive_stream(nl);
    auto out = Simulator(nl).outputs(vs);
    for (std::size_t t = 0; t < vs.size(); ++t) {
        std::vector<std::uint64_t> row{vs.value(t, 0), vs.value(t, 1)};
        REQUIRE(out[t] == design_reference(c, row));
    }
}

TEST_CASE("design slots and tags")
{
    DesignConfig c;
    auto slots = design_slots(c);
    REQUIRE(slots.size() == 7);  // 4 multipliers, 3 adders
    CHECK(slots[0].name == "mul0");
    CHECK(slots[4].op == OpType::Add);
    CHECK(slots[4].width == 16);
    CHECK(slots[6].width == 17);
    auto nl = build_design(c);
    for (const auto& s : slots) CHECK(nl.instances().count("fir." + s.name) == 1);

    DesignConfig f;
    f.design = DesignKind::FftButterfly;
    auto fs = design_slots(f);
    REQUIRE(fs.size() == 3);
    CHECK(fs[2].op == OpType::Sub);
}

TEST_CASE("approximate assignment changes only its slot")
{
    DesignConfig c;
    c.taps = 2;
    c.width = 4;
    c.coeffs = {0xF, 0x5};
    c.assign["mul0"] = {ArchKind::Trunc, 2, false};
    auto nl = build_design(c);
    auto vs = exhaustive_stream(nl);
    auto out = Simulator(nl).outputs(vs);
    std::size_t differ = 0;
    for (std::size_t t = 0; t < vs.size(); ++t) {
        const std::uint64_t x0 = vs.value(t, 0), x1 = vs.value(t, 1);
        CHECK(out[t] <= x0 * 0xF + x1 * 0x5);  // truncation only drops partial products
        differ += out[t] != x0 * 0xF + x1 * 0x5;
    }
    CHECK(differ > 0);
}

TEST_CASE("design parameter errors")
{
    DesignConfig c;
    c.coeffs = {1, 2, 3};
    CHECK_THROWS_AS(c.validate(), BadParams);
    c.coeffs = {1, 2, 3, 0x100};
    CHECK_THROWS_AS(c.validate(), BadParams);
    c.coeffs = {1, 2, 3, 4};
    c.assign["mul9"] = {};
    CHECK_THROWS_AS(c.validate(), BadParams);
    c.assign.clear();
    c.assign["mul0"] = {ArchKind::Loa, 2, false};  // LOA is an adder architecture
    CHECK_THROWS_AS(build_design(c), BadParams);
    c.assign.clear();
    c.width = 1;
    CHECK_THROWS_AS(c.validate(), BadParams);
    DesignConfig f;
    f.design = DesignKind::FftButterfly;
    f.twiddle = 0x100;
    CHECK_THROWS_AS(f.validate(), BadParams);
}
