#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "qcell/layout_io.hpp"

using namespace qcell;

namespace {

const char* kMinimalCell = R"(
# single five-qubit cell
[[qubit]]
id = "Q1"
freq_idle = 6550.0
anharmonicity = -150.0
n_levels = 4
t1 = 20000.0
tunable = false

[[qubit]]
id = "Q2"
freq_idle = 5050.0
anharmonicity = -150.0

[[qubit]]
id = "Q3"
freq_idle = 5250.0
anharmonicity = -150.0

[[qubit]]
id = "Q4"
freq_idle = 5070.0
anharmonicity = -150.0

[[qubit]]
id = "Q5"
freq_idle = 5270.0
anharmonicity = -150.0

[[coupler]]
id = "C12"
freq = 7600.0
band = [6700.0, 9500.0]

[[coupler]]
id = "C13"
freq = 7600.0
band = [6700.0, 9500.0]

[[coupler]]
id = "C14"
freq = 7600.0
band = [6700.0, 9500.0]

[[coupler]]
id = "C15"
freq = 7600.0
band = [6700.0, 9500.0]
)";

std::string minimal_cell_text() {
  std::ostringstream os;
  os << kMinimalCell;
  const char* sides[] = {"Q2", "Q3", "Q4", "Q5"};
  const char* cpl[] = {"C12", "C13", "C14", "C15"};
  for (int k = 0; k < 4; ++k) {
    os << "[[edge]]\nendpoints = [\"Q1\", \"" << cpl[k]
       << "\"]\nstrength = 100.0\nkind = \"qubit_coupler\"\n\n";
    os << "[[edge]]\nendpoints = [\"" << sides[k] << "\", \"" << cpl[k]
       << "\"]\nstrength = 100.0\nkind = \"qubit_coupler\"\n\n";
    os << "[[edge]]\nendpoints = [\"Q1\", \"" << sides[k]
       << "\"]\nstrength = 8.0\nkind = \"radial\"\n\n";
    os << "[[edge]]\nendpoints = [\"" << sides[k] << "\", \""
       << sides[(k + 1) % 4] << "\"]\nstrength = 2.0\nkind = \"side\"\n\n";
  }
  os << "[[cell]]\nlabel = \"A\"\ncentral = \"Q1\"\n"
     << "sides = [\"Q2\", \"Q3\", \"Q4\", \"Q5\"]\n"
     << "couplers = [\"C12\", \"C13\", \"C14\", \"C15\"]\n";
  return os.str();
}

bool layouts_equal(const DeviceLayout& a, const DeviceLayout& b) {
  nlohmann::json ja = a, jb = b;
  return ja == jb;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("minimal well-formed layout loads with one cell") {
  std::istringstream in(minimal_cell_text());
  DeviceLayout l = parse_layout_text(in);
  CHECK(l.qubits.size() == 5);
  CHECK(l.couplers.size() == 4);
  CHECK(l.edges.size() == 16);
  REQUIRE(l.cells.size() == 1);
  CHECK(l.cells[0].label == "A");
}

TEST_CASE("duplicate unordered edge is rejected") {
  std::string text = minimal_cell_text();
  text += "\n[[edge]]\nendpoints = [\"Q2\", \"Q1\"]\nstrength = 1.0\nkind = \"radial\"\n";
  std::istringstream in(text);
  REQUIRE_THROWS_WITH(parse_layout_text(in),
                      Catch::Matchers::ContainsSubstring("duplicate edge"));
}

TEST_CASE("spec invariants are enforced") {
  DeviceLayout l = testfix::pair_with_coupler();

  SECTION("tunable qubit needs a band containing its frequency") {
    l.qubits[0].tunable = true;
    REQUIRE_THROWS_AS(l.validate(), ValidationError);
    l.qubits[0].band = FrequencyBand{6100.0, 6500.0};
    REQUIRE_THROWS_AS(l.validate(), ValidationError);
    l.qubits[0].band = FrequencyBand{5800.0, 6500.0};
    REQUIRE_NOTHROW(l.validate());
  }
  SECTION("positive anharmonicity is rejected") {
    l.qubits[1].anharmonicity_mhz = 5.0;
    REQUIRE_THROWS_AS(l.validate(), ValidationError);
  }
  SECTION("coupler frequency must sit inside its band") {
    l.couplers[0].freq_mhz = 9500.0;
    REQUIRE_THROWS_AS(l.validate(), ValidationError);
  }
  SECTION("edges must resolve to declared elements") {
    l.edges.push_back({"q1", "ghost", 1.0, EdgeKind::Side});
    REQUIRE_THROWS_WITH(l.validate(),
                        Catch::Matchers::ContainsSubstring("ghost"));
  }
}

TEST_CASE("generator produces the 53-qubit, 33-cell pattern") {
  DeviceLayout big = generate_sycamore_like(4, 8);
  CHECK(big.qubits.size() == 53);
  CHECK(big.cells.size() == 33);
  // labels run A..Z then A1..G1
  CHECK(big.cells.front().label == "A");
  CHECK(big.cells.back().label == "G1");
}

TEST_CASE("smallest diamond is a single cell") {
  DeviceLayout l = generate_sycamore_like(2, 2);
  CHECK(l.qubits.size() == 5);
  CHECK(l.couplers.size() == 4);
  CHECK(l.cells.size() == 1);
}

TEST_CASE("generation is deterministic in the seed") {
  GeneratorParams p;
  p.seed = 77;
  DeviceLayout a = generate_sycamore_like(3, 3, p);
  DeviceLayout b = generate_sycamore_like(3, 3, p);
  CHECK(layouts_equal(a, b));
  p.seed = 78;
  DeviceLayout c = generate_sycamore_like(3, 3, p);
  CHECK_FALSE(layouts_equal(a, c));
}

TEST_CASE("generated layouts pass load-time validation") {
  for (auto [r, c] : {std::pair{2, 2}, {2, 4}, {3, 5}, {4, 8}}) {
    DeviceLayout l = generate_sycamore_like(r, c);
    REQUIRE_NOTHROW(l.validate());
  }
}

TEST_CASE("edge strength lookup is symmetric") {
  DeviceLayout l = generate_sycamore_like(2, 3);
  for (const auto& e : l.edges) {
    CHECK(l.strength(e.a, e.b) == l.strength(e.b, e.a));
    CHECK(l.strength(e.a, e.b) == e.strength_mhz);
  }
  CHECK(l.strength("Q0_0", "Q0_0") == 0.0);
}

TEST_CASE("cell subcircuit induces the full 9-element neighborhood") {
  DeviceLayout big = generate_sycamore_like(4, 8);
  DeviceLayout sub = big.cell_subcircuit("A");
  CHECK(sub.qubits.size() == 5);
  CHECK(sub.couplers.size() == 4);
  CHECK(sub.edges.size() >= 12);
  REQUIRE_THROWS_WITH(big.cell_subcircuit("ZZ9"),
                      Catch::Matchers::ContainsSubstring("ZZ9"));

  DeviceLayout one = generate_sycamore_like(2, 2);
  DeviceLayout again = one.cell_subcircuit(one.cells.front().label);
  CHECK(layouts_equal(one, again));
}

TEST_CASE("text round-trip preserves every field") {
  DeviceLayout l = generate_sycamore_like(2, 3);
  std::string path = temp_path("qcell_roundtrip.layout");
  save_layout(l, path);
  DeviceLayout back = load_layout(path);
  CHECK(layouts_equal(l, back));
  // a second save is byte-identical
  std::string path2 = temp_path("qcell_roundtrip2.layout");
  save_layout(back, path2);
  std::ifstream f1(path), f2(path2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("json mirror carries the same schema") {
  DeviceLayout l = generate_sycamore_like(2, 2);
  std::string path = temp_path("qcell_roundtrip.json");
  save_layout(l, path);
  DeviceLayout back = load_layout(path);
  CHECK(layouts_equal(l, back));
  std::remove(path.c_str());
}

TEST_CASE("malformed files report parse errors") {
  std::istringstream bad1("[[qubit]]\nid 6000\n");
  REQUIRE_THROWS_AS(parse_layout_text(bad1), ParseError);
  std::istringstream bad2("[[rotor]]\nid = \"x\"\n");
  REQUIRE_THROWS_AS(parse_layout_text(bad2), ParseError);
  std::istringstream bad3("[[qubit]]\nid = \"q\"\nfreq_idle = abc\n");
  REQUIRE_THROWS_AS(parse_layout_text(bad3), ParseError);
  REQUIRE_THROWS_AS(load_layout("/nonexistent/file.layout"), ParseError);
}

TEST_CASE("bundled sycamore-like layout matches the 53/33 pattern") {
  DeviceLayout l = load_layout(std::string(QCELL_DATA_DIR) + "/sycamore_like.layout");
  CHECK(l.qubits.size() == 53);
  CHECK(l.cells.size() == 33);
}
