#pragma once

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcell/device.hpp"

namespace qcell {

// The native layout file is a minimal TOML-style document: [[qubit]],
// [[coupler]], [[edge]] and [[cell]] sections with key = value lines.
// Values are numbers, booleans, quoted strings or flat arrays of those.
namespace layout_detail {

struct Value {
  enum class Kind { Number, Bool, String, Array } kind = Kind::Number;
  double num = 0.0;
  bool boolean = false;
  std::string str;
  std::vector<Value> array;
};

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Value parse_scalar(const std::string& tok, int line_no) {
  Value v;
  if (tok.empty()) throw ParseError("empty value at line " + std::to_string(line_no));
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"')
      throw ParseError("unterminated string at line " + std::to_string(line_no));
    v.kind = Value::Kind::String;
    v.str = tok.substr(1, tok.size() - 2);
    return v;
  }
  if (tok == "true" || tok == "false") {
    v.kind = Value::Kind::Bool;
    v.boolean = (tok == "true");
    return v;
  }
  try {
    std::size_t pos = 0;
    v.num = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError("cannot parse value '" + tok + "' at line " +
                     std::to_string(line_no));
  }
  v.kind = Value::Kind::Number;
  return v;
}

inline Value parse_value(const std::string& raw, int line_no) {
  std::string s = strip(raw);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']')
      throw ParseError("unterminated array at line " + std::to_string(line_no));
    Value v;
    v.kind = Value::Kind::Array;
    std::string body = s.substr(1, s.size() - 2);
    std::string tok;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        if (!strip(tok).empty()) v.array.push_back(parse_scalar(strip(tok), line_no));
        tok.clear();
      } else {
        tok += c;
      }
    }
    if (!strip(tok).empty()) v.array.push_back(parse_scalar(strip(tok), line_no));
    return v;
  }
  return parse_scalar(s, line_no);
}

struct Section {
  std::string name;
  int line_no = 0;
  std::map<std::string, Value> entries;

  bool has(const std::string& k) const { return entries.count(k) > 0; }
  const Value& get(const std::string& k) const {
    auto it = entries.find(k);
    if (it == entries.end())
      throw ParseError("[[" + name + "]] near line " + std::to_string(line_no) +
                       ": missing field '" + k + "'");
    return it->second;
  }
  double num(const std::string& k) const {
    const Value& v = get(k);
    if (v.kind != Value::Kind::Number)
      throw ParseError("field '" + k + "' must be a number");
    return v.num;
  }
  std::string str(const std::string& k) const {
    const Value& v = get(k);
    if (v.kind != Value::Kind::String)
      throw ParseError("field '" + k + "' must be a string");
    return v.str;
  }
  bool boolean(const std::string& k) const {
    const Value& v = get(k);
    if (v.kind != Value::Kind::Bool)
      throw ParseError("field '" + k + "' must be a boolean");
    return v.boolean;
  }
  std::vector<double> num_array(const std::string& k) const {
    const Value& v = get(k);
    if (v.kind != Value::Kind::Array)
      throw ParseError("field '" + k + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v.array) {
      if (e.kind != Value::Kind::Number)
        throw ParseError("field '" + k + "' must hold numbers");
      out.push_back(e.num);
    }
    return out;
  }
  std::vector<std::string> str_array(const std::string& k) const {
    const Value& v = get(k);
    if (v.kind != Value::Kind::Array)
      throw ParseError("field '" + k + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : v.array) {
      if (e.kind != Value::Kind::String)
        throw ParseError("field '" + k + "' must hold strings");
      out.push_back(e.str);
    }
    return out;
  }
};

inline std::vector<Section> parse_sections(std::istream& in) {
  std::vector<Section> sections;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string s = strip(line);
    if (s.empty()) continue;
    if (s.size() > 4 && s.substr(0, 2) == "[[" && s.substr(s.size() - 2) == "]]") {
      Section sec;
      sec.name = strip(s.substr(2, s.size() - 4));
      sec.line_no = line_no;
      sections.push_back(sec);
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value' at line " + std::to_string(line_no));
    if (sections.empty())
      throw ParseError("entry outside any section at line " + std::to_string(line_no));
    std::string key = strip(s.substr(0, eq));
    sections.back().entries[key] = parse_value(s.substr(eq + 1), line_no);
  }
  return sections;
}

}  // namespace layout_detail

inline void to_json(nlohmann::json& j, const DeviceLayout& layout) {
  j = nlohmann::json::object();
  auto& jq = j["qubit"] = nlohmann::json::array();
  for (const auto& q : layout.qubits) {
    nlohmann::json e{{"id", q.id},
                     {"freq_idle", q.freq_idle_mhz},
                     {"anharmonicity", q.anharmonicity_mhz},
                     {"n_levels", q.n_levels},
                     {"t1", q.t1_ns},
                     {"tunable", q.tunable}};
    if (q.band) e["band"] = {q.band->min_mhz, q.band->max_mhz};
    jq.push_back(e);
  }
  auto& jc = j["coupler"] = nlohmann::json::array();
  for (const auto& c : layout.couplers) {
    nlohmann::json e{{"id", c.id},
                     {"freq", c.freq_mhz},
                     {"band", {c.band.min_mhz, c.band.max_mhz}},
                     {"n_levels", c.n_levels}};
    if (c.anharmonicity_mhz != 0.0) e["anharmonicity"] = c.anharmonicity_mhz;
    jc.push_back(e);
  }
  auto& je = j["edge"] = nlohmann::json::array();
  for (const auto& e : layout.edges)
    je.push_back({{"endpoints", {e.a, e.b}},
                  {"strength", e.strength_mhz},
                  {"kind", to_string(e.kind)}});
  auto& jl = j["cell"] = nlohmann::json::array();
  for (const auto& c : layout.cells)
    jl.push_back({{"label", c.label},
                  {"central", c.central},
                  {"sides", c.sides},
                  {"couplers", c.couplers}});
}

inline void from_json(const nlohmann::json& j, DeviceLayout& layout) {
  layout = DeviceLayout{};
  for (const auto& e : j.value("qubit", nlohmann::json::array())) {
    TransmonSpec q;
    q.id = e.at("id").get<std::string>();
    q.freq_idle_mhz = e.at("freq_idle").get<double>();
    q.anharmonicity_mhz = e.at("anharmonicity").get<double>();
    q.n_levels = e.value("n_levels", 4);
    q.t1_ns = e.value("t1", 20000.0);
    q.tunable = e.value("tunable", false);
    if (e.contains("band"))
      q.band = FrequencyBand{e["band"][0].get<double>(), e["band"][1].get<double>()};
    layout.qubits.push_back(q);
  }
  for (const auto& e : j.value("coupler", nlohmann::json::array())) {
    CouplerSpec c;
    c.id = e.at("id").get<std::string>();
    c.freq_mhz = e.at("freq").get<double>();
    c.band = FrequencyBand{e.at("band")[0].get<double>(), e.at("band")[1].get<double>()};
    c.n_levels = e.value("n_levels", 3);
    c.anharmonicity_mhz = e.value("anharmonicity", 0.0);
    layout.couplers.push_back(c);
  }
  for (const auto& e : j.value("edge", nlohmann::json::array())) {
    CouplingEdge edge;
    edge.a = e.at("endpoints")[0].get<std::string>();
    edge.b = e.at("endpoints")[1].get<std::string>();
    edge.strength_mhz = e.at("strength").get<double>();
    edge.kind = edge_kind_from_string(e.at("kind").get<std::string>());
    layout.edges.push_back(edge);
  }
  for (const auto& e : j.value("cell", nlohmann::json::array())) {
    UnitCellView c;
    c.label = e.at("label").get<std::string>();
    c.central = e.at("central").get<std::string>();
    for (int k = 0; k < 4; ++k) {
      c.sides[k] = e.at("sides")[k].get<std::string>();
      c.couplers[k] = e.at("couplers")[k].get<std::string>();
    }
    layout.cells.push_back(c);
  }
}

inline DeviceLayout parse_layout_text(std::istream& in) {
  DeviceLayout layout;
  for (const auto& sec : layout_detail::parse_sections(in)) {
    if (sec.name == "qubit") {
      TransmonSpec q;
      q.id = sec.str("id");
      q.freq_idle_mhz = sec.num("freq_idle");
      q.anharmonicity_mhz = sec.num("anharmonicity");
      if (sec.has("n_levels")) q.n_levels = static_cast<int>(sec.num("n_levels"));
      if (sec.has("t1")) q.t1_ns = sec.num("t1");
      if (sec.has("tunable")) q.tunable = sec.boolean("tunable");
      if (sec.has("band")) {
        auto b = sec.num_array("band");
        if (b.size() != 2) throw ParseError("qubit band must have two entries");
        q.band = FrequencyBand{b[0], b[1]};
      }
      layout.qubits.push_back(q);
    } else if (sec.name == "coupler") {
      CouplerSpec c;
      c.id = sec.str("id");
      c.freq_mhz = sec.num("freq");
      auto b = sec.num_array("band");
      if (b.size() != 2) throw ParseError("coupler band must have two entries");
      c.band = FrequencyBand{b[0], b[1]};
      if (sec.has("n_levels")) c.n_levels = static_cast<int>(sec.num("n_levels"));
      if (sec.has("anharmonicity")) c.anharmonicity_mhz = sec.num("anharmonicity");
      layout.couplers.push_back(c);
    } else if (sec.name == "edge") {
      CouplingEdge e;
      auto ep = sec.str_array("endpoints");
      if (ep.size() != 2) throw ParseError("edge endpoints must have two entries");
      e.a = ep[0];
      e.b = ep[1];
      e.strength_mhz = sec.num("strength");
      e.kind = edge_kind_from_string(sec.str("kind"));
      layout.edges.push_back(e);
    } else if (sec.name == "cell") {
      UnitCellView c;
      c.label = sec.str("label");
      c.central = sec.str("central");
      auto sides = sec.str_array("sides");
      auto cpl = sec.str_array("couplers");
      if (sides.size() != 4 || cpl.size() != 4)
        throw ParseError("cell " + c.label + " must list 4 sides and 4 couplers");
      std::copy(sides.begin(), sides.end(), c.sides.begin());
      std::copy(cpl.begin(), cpl.end(), c.couplers.begin());
      layout.cells.push_back(c);
    } else {
      throw ParseError("unknown section [[" + sec.name + "]] at line " +
                       std::to_string(sec.line_no));
    }
  }
  layout.validate();
  return layout;
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  std::string s = os.str();
  // keep a decimal marker so round-trips stay unambiguous
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

inline void write_layout_text(const DeviceLayout& layout, std::ostream& out) {
  for (const auto& q : layout.qubits) {
    out << "[[qubit]]\n";
    out << "id = \"" << q.id << "\"\n";
    out << "freq_idle = " << format_number(q.freq_idle_mhz) << "\n";
    out << "anharmonicity = " << format_number(q.anharmonicity_mhz) << "\n";
    out << "n_levels = " << q.n_levels << "\n";
    out << "t1 = " << format_number(q.t1_ns) << "\n";
    out << "tunable = " << (q.tunable ? "true" : "false") << "\n";
    if (q.band)
      out << "band = [" << format_number(q.band->min_mhz) << ", "
          << format_number(q.band->max_mhz) << "]\n";
    out << "\n";
  }
  for (const auto& c : layout.couplers) {
    out << "[[coupler]]\n";
    out << "id = \"" << c.id << "\"\n";
    out << "freq = " << format_number(c.freq_mhz) << "\n";
    out << "band = [" << format_number(c.band.min_mhz) << ", "
        << format_number(c.band.max_mhz) << "]\n";
    out << "n_levels = " << c.n_levels << "\n";
    if (c.anharmonicity_mhz != 0.0)
      out << "anharmonicity = " << format_number(c.anharmonicity_mhz) << "\n";
    out << "\n";
  }
  for (const auto& e : layout.edges) {
    out << "[[edge]]\n";
    out << "endpoints = [\"" << e.a << "\", \"" << e.b << "\"]\n";
    out << "strength = " << format_number(e.strength_mhz) << "\n";
    out << "kind = \"" << to_string(e.kind) << "\"\n\n";
  }
  for (const auto& c : layout.cells) {
    out << "[[cell]]\n";
    out << "label = \"" << c.label << "\"\n";
    out << "central = \"" << c.central << "\"\n";
    out << "sides = [\"" << c.sides[0] << "\", \"" << c.sides[1] << "\", \""
        << c.sides[2] << "\", \"" << c.sides[3] << "\"]\n";
    out << "couplers = [\"" << c.couplers[0] << "\", \"" << c.couplers[1]
        << "\", \"" << c.couplers[2] << "\", \"" << c.couplers[3] << "\"]\n\n";
  }
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline DeviceLayout load_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open layout file '" + path + "'");
  if (has_suffix(path, ".json")) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON layout: ") + e.what());
    }
    DeviceLayout layout = j.get<DeviceLayout>();
    layout.validate();
    return layout;
  }
  return parse_layout_text(in);
}

inline void save_layout(const DeviceLayout& layout, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write layout file '" + path + "'");
  if (has_suffix(path, ".json")) {
    nlohmann::json j = layout;
    out << j.dump(2) << "\n";
  } else {
    write_layout_text(layout, out);
  }
}

}  // namespace qcell
