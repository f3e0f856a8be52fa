#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "logicsim/netlist.hpp"
#include "logicsim/truth_table.hpp"
#include "support/test_support.hpp"

using namespace logicsim;
using namespace logicsim::testing;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sample(const char* name) { return read_file(std::string(LOGICSIM_SAMPLES_DIR) + "/" + name); }
std::string fixture(const char* name) { return read_file(std::string(LOGICSIM_FIXTURES_DIR) + "/" + name); }

parse_error error_of(std::string_view text) {
  try {
    parse(text);
  } catch (const parse_error& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return parse_error(ParseErrorKind::Syntax, {}, "none");
}

}  // namespace

TEST(Netlist, ParsesHalfAdderSample) {
  auto c = parse(sample("half_adder.lgc"));
  auto h = make_half_adder();
  EXPECT_EQ(c, h.circuit);
}

TEST(Netlist, SerializesHalfAdderCanonically) {
  EXPECT_EQ(serialize(make_half_adder().circuit),
            "input A switch\n"
            "input B switch @ (0, 80)\n"
            "gate X xor @ (160, 0)\n"
            "gate N and @ (160, 80)\n"
            "output S led @ (320, 0)\n"
            "output C0 led @ (320, 80)\n"
            "\n"
            "wire A.out -> X.in0\n"
            "wire B.out -> X.in1\n"
            "wire A.out -> N.in0\n"
            "wire B.out -> N.in1\n"
            "wire X.out -> S.in\n"
            "wire N.out -> C0.in\n");
}

TEST(Netlist, ForwardReferencesAndShuffledOrder) {
  auto c = parse(fixture("half_adder_shuffled.lgc"));
  EXPECT_EQ(c.size(), 6u);
  EXPECT_EQ(c.connection_count(), 6u);
  auto t = truth_table(c);
  // Declaration order is S N B C0 A X, so the switches are B then A.
  EXPECT_EQ(c.element(t.inputs[0]).name, "B");
  auto h = make_half_adder();
  for (bool a : {false, true}) {
    for (bool b : {false, true}) {
      c.set_switch(*c.find_by_name("A"), a);
      c.set_switch(*c.find_by_name("B"), b);
      h.circuit.set_switch(h.a, a);
      h.circuit.set_switch(h.b, b);
      auto r1 = evaluate(c), r2 = evaluate(h.circuit);
      EXPECT_EQ(r1.indicator(*c.find_by_name("S")), r2.indicator(h.s));
      EXPECT_EQ(r1.indicator(*c.find_by_name("C0")), r2.indicator(h.c0));
    }
  }
}

TEST(Netlist, SwitchStateAndConstants) {
  auto c = parse("input A switch:on\ninput B switch:off\ninput K const1\ninput Z const0\n");
  EXPECT_EQ(c.element(*c.find_by_name("A")).kind, ElementKind{InputKind::make_switch(true)});
  EXPECT_EQ(c.element(*c.find_by_name("B")).kind, ElementKind{InputKind::make_switch(false)});
  EXPECT_EQ(c.element(*c.find_by_name("K")).kind, ElementKind{InputKind::const1()});
  EXPECT_EQ(serialize(c), "input A switch:on\ninput B switch\ninput K const1\ninput Z const0\n");
}

TEST(Netlist, PinAliases) {
  auto c = parse("input A switch\ngate N not\ngate G and\nwire A.out0 -> N.in0\nwire N.out -> G.in1\n");
  EXPECT_EQ(c.connection_count(), 2u);
  EXPECT_NE(serialize(c).find("wire A.out -> N.in\n"), std::string::npos);
}

TEST(Netlist, NumberForms) {
  auto c = parse("gate G buf @ (-12.5, 1e2)\ngate H buf @ (+3, .25)\n");
  EXPECT_EQ(c.element(ElementId{1}).position, (Position{-12.5, 100}));
  EXPECT_EQ(c.element(ElementId{2}).position, (Position{3, 0.25}));
  EXPECT_EQ(serialize(c), "gate G buf @ (-12.5, 100)\ngate H buf @ (3, 0.25)\n");
}

TEST(Netlist, CommentsBlankLinesAndCrLf) {
  auto c = parse("# header\r\n\r\n  input A switch   # note\r\n\t\r\noutput Y lamp\r\nwire A.out -> Y.in\r\n");
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.connection_count(), 1u);
}

TEST(Netlist, EmptyText) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("# nothing\n\n").empty());
  EXPECT_EQ(serialize(Circuit{}), "");
}

struct ErrorCase {
  const char* text;
  ParseErrorKind kind;
  std::size_t line, column;
};

class NetlistErrors : public ::testing::TestWithParam<ErrorCase> {};

TEST_P(NetlistErrors, KindAndLocation) {
  const auto& p = GetParam();
  auto e = error_of(p.text);
  EXPECT_EQ(e.kind(), p.kind) << e.what();
  EXPECT_EQ(e.line(), p.line) << e.what();
  EXPECT_EQ(e.column(), p.column) << e.what();
}

INSTANTIATE_TEST_SUITE_P(
    Cases, NetlistErrors,
    ::testing::Values(ErrorCase{"gate G and\nblah X\n", ParseErrorKind::Syntax, 2, 1},
                      ErrorCase{"gate G and @ (1 2)\n", ParseErrorKind::Syntax, 1, 17},
                      ErrorCase{"gate G and extra\n", ParseErrorKind::Syntax, 1, 12},
                      ErrorCase{"gate G and\n  gate H ?\n", ParseErrorKind::Syntax, 2, 10},
                      ErrorCase{"wire A.out X.in\n", ParseErrorKind::Syntax, 1, 12},
                      ErrorCase{"input A const1:on\n", ParseErrorKind::Syntax, 1, 16},
                      ErrorCase{"input A switch:maybe\n", ParseErrorKind::Syntax, 1, 16},
                      ErrorCase{"gate G and @ (1e999, 0)\n", ParseErrorKind::Syntax, 1, 15},
                      ErrorCase{"gate G mux\n", ParseErrorKind::UnknownKind, 1, 8},
                      ErrorCase{"input A button\n", ParseErrorKind::UnknownKind, 1, 9},
                      ErrorCase{"output Y bulb\n", ParseErrorKind::UnknownKind, 1, 10},
                      ErrorCase{"gate G and\n\ngate G or\n", ParseErrorKind::DuplicateName, 3, 6},
                      ErrorCase{"gate G and\nwire G.out -> Q.in0\n", ParseErrorKind::UnknownName, 2, 15},
                      ErrorCase{"gate G and\nwire G.in0 -> G.in1\n", ParseErrorKind::BadPin, 2, 6},
                      ErrorCase{"gate G and\nwire G.out -> G.out\n", ParseErrorKind::BadPin, 2, 15},
                      ErrorCase{"gate G and\nwire G.out -> G.in2\n", ParseErrorKind::BadPin, 2, 15},
                      ErrorCase{"gate G and\nwire G.out -> G.in01\n", ParseErrorKind::BadPin, 2, 15},
                      ErrorCase{"gate G and\nwire G.out -> G.x\n", ParseErrorKind::BadPin, 2, 15},
                      ErrorCase{"input A switch\ngate G not\nwire A.out -> G.in\nwire A.out -> G.in\n",
                                ParseErrorKind::InputAlreadyDriven, 4, 15},
                      ErrorCase{"input A switch\ninput B switch\ngate G not\nwire A.out -> G.in\nwire B.out -> G.in\n",
                                ParseErrorKind::InputAlreadyDriven, 5, 15}));

TEST(Netlist, ErrorMessageIncludesLocation) {
  auto e = error_of("gate G and\ngate G or\n");
  EXPECT_EQ(std::string(e.what()).substr(0, 4), "2:6:");
  EXPECT_NE(e.message().find("line 1"), std::string::npos);
}

TEST(Netlist, GeneratedNamesAvoidCollisions) {
  Circuit c;
  auto g = c.add_element(GateKind::And, {}, "g2");
  auto h = c.add_element(GateKind::Or);  // would be g2
  auto s = c.add_element(InputKind::make_switch(), {}, "not an identifier");
  auto names = element_names(c);
  EXPECT_EQ(names[g], "g2");
  EXPECT_EQ(names[h], "g2_1");
  EXPECT_EQ(names[s], "sw3");
  EXPECT_TRUE(same_structure(parse(serialize(c)), c));
}

TEST(Netlist, RoundTripPreservesStructure) {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 300; ++i) {
    auto c = i % 2 ? random_acyclic_circuit(rng) : random_any_circuit(rng, 14);
    // Knock out a few elements so ids have gaps.
    if (!c.empty() && i % 3 == 0) c.remove_element(c.elements().begin()->first);
    const auto text = serialize(c);
    auto back = parse(text);
    ASSERT_TRUE(same_structure(c, back)) << text;
    EXPECT_EQ(serialize(back), text);
    EXPECT_EQ(evaluate(back).diagnostics.size(), evaluate(c).diagnostics.size());
  }
}

TEST(Netlist, FormatIsIdempotent) {
  for (const auto* f : {"half_adder_shuffled.lgc", "nand_self_loop.lgc", "xor_nand_decomposition.lgc"}) {
    auto once = serialize(parse(fixture(f)));
    EXPECT_EQ(serialize(parse(once)), once) << f;
  }
}

TEST(Netlist, SerializationIsDeterministic) {
  std::mt19937_64 r1(8), r2(8);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(serialize(random_acyclic_circuit(r1)), serialize(random_acyclic_circuit(r2)));
}
