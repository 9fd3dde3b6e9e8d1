#include <gtest/gtest.h>

#include "fxpipe/examples.hpp"
#include "fxpipe/vhdl.hpp"
#include "vhdl_tokens.hpp"

using namespace fxpipe;
using testing_support::read_file;
using testing_support::vhdl_tokens;

namespace {

const std::string kGolden = FXPIPE_GOLDEN_DIR;

FixedPointFormat phi_fmt() { return make_signed_format(10, -3.14, 3.14); }

std::string fragment(const Design& d) { return emit_declarations(d) + "\n" + emit_sequential(d); }

} // namespace

TEST(Vhdl, PipelinedAddMatchesListing)
{
    const auto expected = vhdl_tokens(read_file(kGolden + "/listing2.vhd"));
    ASSERT_FALSE(expected.empty());
    EXPECT_EQ(vhdl_tokens(fragment(examples::pipelined_add())), expected);
}

TEST(Vhdl, TokenizerIgnoresWhitespaceOnly)
{
    EXPECT_EQ(vhdl_tokens("a  <= resize(b ,11)+c;"), vhdl_tokens("a<=resize(b,11)+c;"));
    EXPECT_NE(vhdl_tokens("a <= b;"), vhdl_tokens("a <= c;"));
}

TEST(Vhdl, ExampleEntitiesMatchGoldens)
{
    const std::pair<const char*, Design> cases[] = {
        {"pipelined_add", examples::pipelined_add()},
        {"line_fit", examples::line_fit()},
        {"circle_fit", examples::circle_fit()},
    };
    for (const auto& [name, d] : cases)
        EXPECT_EQ(emit_entity(d, name), read_file(kGolden + "/" + name + ".vhd")) << name;
}

TEST(Vhdl, EntityStructure)
{
    const std::string text = emit_entity(examples::line_fit(), "line_fit", "clock");
    const auto tok = vhdl_tokens(text, false);
    auto count = [&](const std::string& t) { return std::count(tok.begin(), tok.end(), t); };
    EXPECT_EQ(count("rising_edge"), 1);
    EXPECT_EQ(count("process"), 2);
    EXPECT_NE(text.find("clock : in std_logic;"), std::string::npos);
    EXPECT_NE(text.find("cot_out : out"), std::string::npos);
    EXPECT_NE(text.find("component line_fit_inv_den_rom"), std::string::npos);
    EXPECT_NE(text.find("use ieee.numeric_std.all;"), std::string::npos);
    EXPECT_EQ(text.find("--  "), std::string::npos);
}

TEST(Vhdl, EveryStatefulNodeIsDeclared)
{
    const Design d = examples::circle_fit();
    const std::string text = emit_entity(d, "circle_fit");
    for (const Node& n : d.nodes()) {
        if (n.kind == NodeKind::register_assign || n.kind == NodeKind::lut_read) {
            EXPECT_NE(text.find("signal " + n.name + " : "), std::string::npos) << n.name;
        }
        if (n.kind == NodeKind::input) {
            EXPECT_NE(text.find("    " + n.name + " : in "), std::string::npos) << n.name;
        }
    }
    for (const auto& b : d.buffers())
        EXPECT_NE(text.find("signal " + b.name + " : "), std::string::npos) << b.name;
}

TEST(Vhdl, SelectAndCompare)
{
    Design d("sel");
    Signal a = d.input("a", phi_fmt());
    Signal b = d.input("b", phi_fmt());
    Signal lt = d.compare(a, CompareOp::lt, b);
    d.output("m", d.assign("m", d.select(lt, a, b)));
    d.output("f", d.assign("f", d.compare(a, CompareOp::ne, b)));
    const std::string s = emit_sequential(freeze(d));
    EXPECT_NE(s.find("m <= a when (a < b) else b;"), std::string::npos) << s;
    EXPECT_NE(s.find("f <= \"1\" when (a /= b) else \"0\";"), std::string::npos) << s;
}

TEST(Vhdl, RejectsReservedAndCollidingNames)
{
    {
        Design d("reserved");
        Signal x = d.input("signal", phi_fmt());
        d.output("y", d.assign("y", x + x));
        EXPECT_THROW(emit_entity(freeze(d), "reserved"), VhdlError);
    }
    {
        Design d("case");
        Signal x = d.input("Foo", phi_fmt());
        d.output("y", d.assign("foo", x + x));
        EXPECT_THROW(emit_entity(freeze(d), "case"), VhdlError);
    }
    {
        Design d("ent");
        Signal x = d.input("x", phi_fmt());
        d.output("y", d.assign("y", x + x));
        EXPECT_THROW(emit_entity(freeze(d), "entity"), VhdlError);
        EXPECT_THROW(emit_entity(freeze(d), "bad__name"), VhdlError);
    }
    {
        Design d("unscheduled");
        d.input("x", phi_fmt());
        EXPECT_THROW(emit_entity(d, "u"), VhdlError);
    }
}

TEST(Vhdl, EmissionIsDeterministic)
{
    EXPECT_EQ(emit_entity(examples::circle_fit(), "c"), emit_entity(examples::circle_fit(), "c"));
}

TEST(Vhdl, BooleanRegisterDeclaration)
{
    Design d("flag");
    Signal a = d.input("a", phi_fmt());
    Signal b = d.input("b", phi_fmt());
    d.output("c", d.assign("c", d.compare(a, CompareOp::gt, b)));
    EXPECT_NE(emit_declarations(freeze(d)).find("signal c : unsigned(0 downto 0) := (others=>'0');\n"),
              std::string::npos);
}

TEST(Vhdl, DeepBufferShiftStatements)
{
    Design d("deep");
    Signal x = d.input("x", phi_fmt());
    Signal y = d.input("y", phi_fmt());
    Signal r1 = d.assign("r1", y + y);
    Signal r2 = d.assign("r2", r1 + y);
    Signal r3 = d.assign("r3", r2 + x);
    d.output("r3", r3);
    const std::string s = emit_sequential(freeze(d));
    EXPECT_NE(s.find("x_b(0) <= x;\nx_b(1) <= x_b(0);\n"), std::string::npos) << s;
    // r2 spans [-1536, 1533], so r3 still fits 12 bits
    EXPECT_NE(s.find("r3 <= r2+x_b(1);"), std::string::npos) << s;
    const std::string decl = emit_declarations(freeze(d));
    EXPECT_NE(decl.find("type S10D2Array is array(1 downto 0) of signed(9 downto 0);"), std::string::npos) << decl;
}
