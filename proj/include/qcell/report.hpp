#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qcell/scan.hpp"

namespace qcell {

namespace report_detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path + "'");
  out << content;
}

}  // namespace report_detail

// ---- CSV writers (schemas fixed; see README) -------------------------------

inline std::string pauli_table_csv(const PauliCoefficients& exact,
                                   const std::map<std::uint32_t, double>& pert2,
                                   const std::map<std::uint32_t, double>& pert3) {
  using report_detail::fmt;
  std::ostringstream os;
  os << "string,alpha_MHz,path\n";
  for (const auto& [mask, a] : exact.alpha_mhz) {
    PauliString p{exact.n_qubits, mask};
    os << p.str() << "," << fmt(a) << ",exact\n";
    auto it2 = pert2.find(mask);
    if (it2 != pert2.end()) os << p.str() << "," << fmt(it2->second) << ",pert2\n";
    auto it3 = pert3.find(mask);
    if (it3 != pert3.end()) os << p.str() << "," << fmt(it3->second) << ",pert3\n";
  }
  return os.str();
}

inline std::string tomography_csv(const TomographyResult& r) {
  using report_detail::fmt;
  std::ostringstream os;
  os << "cell,gside_MHz,j13_MHz,string,alpha_MHz,path\n";
  for (const auto& e : r.rows) {
    os << r.cell << "," << fmt(e.gside_mhz) << "," << fmt(e.j13_mhz) << ","
       << e.pauli << "," << fmt(e.alpha_exact_mhz) << ",exact\n";
    os << r.cell << "," << fmt(e.gside_mhz) << "," << fmt(e.j13_mhz) << ","
       << e.pauli << "," << fmt(e.alpha_pert2_mhz) << ",pert2\n";
    os << r.cell << "," << fmt(e.gside_mhz) << "," << fmt(e.j13_mhz) << ","
       << e.pauli << "," << fmt(e.alpha_pert3_mhz) << ",pert3\n";
  }
  return os.str();
}

inline std::string pet_csv(const PetResult& r) {
  using report_detail::fmt;
  std::ostringstream os;
  os << "cell,x_value,j13_MHz,zz_max_MHz,zzz_max_MHz,ratio\n";
  for (const auto& row : r.rows) {
    if (!row.ok) continue;
    os << row.cell << "," << fmt(row.x_value_mhz) << "," << fmt(row.j13_mhz)
       << "," << fmt(row.zz_max_mhz) << "," << fmt(row.zzz_max_mhz) << ","
       << fmt(row.ratio) << "\n";
  }
  return os.str();
}

inline std::string overlay_csv(const OverlayResult& r, double gside_mhz) {
  using report_detail::fmt;
  std::ostringstream os;
  os << "cell,gside_MHz,j13_target_MHz,j13_MHz,z13_MHz,z123_MHz,z134_MHz,z135_MHz\n";
  for (const auto& row : r.rows) {
    if (!row.ok) continue;
    os << row.cell << "," << fmt(gside_mhz) << "," << fmt(row.j13_target_mhz)
       << "," << fmt(row.j13_mhz) << "," << fmt(row.z13_mhz) << ","
       << fmt(row.z123_mhz) << "," << fmt(row.z134_mhz) << ","
       << fmt(row.z135_mhz) << "\n";
  }
  return os.str();
}

inline std::string phase_csv(const PhaseScanResult& r) {
  using report_detail::fmt;
  std::ostringstream os;
  os << "ratio,zz_max_MHz,zzz_max_MHz,dominant_zz_string,dominant_zzz_string\n";
  for (const auto& row : r.rows) {
    if (!row.ok) continue;
    os << fmt(row.ratio) << "," << fmt(row.zz_max_mhz) << ","
       << fmt(row.zzz_max_mhz) << "," << row.dominant_zz << ","
       << row.dominant_zzz << "\n";
  }
  return os.str();
}

inline std::string fidelity_csv(const FidelitySweepResult& r) {
  using report_detail::fmt;
  std::ostringstream os;
  os << "cell,gside_MHz,noise_level,j_on_MHz,error\n";
  for (const auto& rep : r.reports)
    for (NoiseLevel l : {NoiseLevel::DecoherenceOnly, NoiseLevel::WithZz,
                         NoiseLevel::WithZzz})
      os << rep.cell_label << "," << fmt(rep.gside_mhz) << "," << to_string(l)
         << "," << fmt(rep.j_on_mhz) << "," << fmt(rep.error(l)) << "\n";
  return os.str();
}

// ---- JSON dataset serialization --------------------------------------------

inline void to_json(nlohmann::json& j, const TomographyEntry& e) {
  j = {{"j13_MHz", e.j13_mhz},       {"gside_MHz", e.gside_mhz},
       {"string", e.pauli},          {"alpha_exact_MHz", e.alpha_exact_mhz},
       {"alpha_pert2_MHz", e.alpha_pert2_mhz},
       {"alpha_pert3_MHz", e.alpha_pert3_mhz}};
}

inline void to_json(nlohmann::json& j, const TomographyResult& r) {
  j = {{"kind", "tomography"},
       {"cell", r.cell},
       {"rows", r.rows},
       {"failures", r.failures}};
}

inline void to_json(nlohmann::json& j, const PetRow& row) {
  j = {{"cell", row.cell},        {"x_value", row.x_value_mhz},
       {"j13_MHz", row.j13_mhz},  {"zz_max_MHz", row.zz_max_mhz},
       {"zzz_max_MHz", row.zzz_max_mhz}, {"ratio", row.ratio},
       {"ok", row.ok}};
}

inline void to_json(nlohmann::json& j, const PetResult& r) {
  j = {{"kind", "pet"}, {"rows", r.rows}, {"failures", r.failures}};
}

inline void to_json(nlohmann::json& j, const OverlayRow& row) {
  j = {{"cell", row.cell},
       {"j13_target_MHz", row.j13_target_mhz},
       {"j13_MHz", row.j13_mhz},
       {"z13_MHz", row.z13_mhz},
       {"z123_MHz", row.z123_mhz},
       {"z134_MHz", row.z134_mhz},
       {"z135_MHz", row.z135_mhz},
       {"ok", row.ok}};
}

inline void to_json(nlohmann::json& j, const OverlayResult& r) {
  j = {{"kind", "overlay"}, {"rows", r.rows}, {"failures", r.failures}};
}

inline void to_json(nlohmann::json& j, const PowerLawFit& f) {
  j = {{"exponent", f.exponent},
       {"prefactor", f.prefactor},
       {"residual", f.residual},
       {"n_points", f.n_points}};
  auto& t = j["dominant_trace"] = nlohmann::json::array();
  for (const auto& [r, s] : f.dominant_trace) t.push_back({{"ratio", r}, {"string", s}});
}

inline void to_json(nlohmann::json& j, const PhaseScanRow& r) {
  j = {{"ratio", r.ratio},
       {"zz_max_MHz", r.zz_max_mhz},
       {"zzz_max_MHz", r.zzz_max_mhz},
       {"dominant_zz_string", r.dominant_zz},
       {"dominant_zzz_string", r.dominant_zzz},
       {"ok", r.ok}};
}

inline void to_json(nlohmann::json& j, const PhaseScanResult& r) {
  j = {{"kind", "phase"},
       {"fit_zz", r.fit_zz},
       {"fit_zzz", r.fit_zzz},
       {"rows", r.rows},
       {"failures", r.failures}};
  if (r.crossover)
    j["crossover"] = {{"ratio", r.crossover->ratio},
                      {"bracket_lo", r.crossover->bracket_lo},
                      {"bracket_hi", r.crossover->bracket_hi},
                      {"state", r.crossover->state_tag},
                      {"g_radial_MHz", r.crossover->g_radial_mhz}};
}

inline void to_json(nlohmann::json& j, const FidelityReport& r) {
  j = {{"cell", r.cell_label},
       {"gside_MHz", r.gside_mhz},
       {"j_on_MHz", r.j_on_mhz},
       {"pulse_duration_ns", r.pulse_duration_ns},
       {"error_decoherence", r.error_decoherence},
       {"error_with_zz", r.error_with_zz},
       {"error_with_zzz", r.error_with_zzz},
       {"converged", r.converged},
       {"spectator_mode", r.spectator_mode},
       {"fidelity_definition", r.fidelity_definition},
       {"stray",
        {{"z13_MHz", r.stray.z13},
         {"z123_MHz", r.stray.z123},
         {"z134_MHz", r.stray.z134},
         {"z135_MHz", r.stray.z135}}}};
}

inline void to_json(nlohmann::json& j, const FidelitySweepResult& r) {
  j = {{"kind", "fidelity"}, {"reports", r.reports}, {"failures", r.failures}};
}

// ---- SVG rendering ----------------------------------------------------------

namespace svg_detail {

inline std::string color_scale(double t) {
  // blue (low) -> purple -> red (high), t clamped to [0, 1]
  t = std::clamp(t, 0.0, 1.0);
  int r = static_cast<int>(40 + 215 * t);
  int g = static_cast<int>(40 * (1.0 - t));
  int b = static_cast<int>(200 * (1.0 - t) + 55);
  std::ostringstream os;
  os << "rgb(" << r << "," << g << "," << b << ")";
  return os.str();
}

struct Chart {
  std::ostringstream body;
  double width = 860, height = 520;
  double ml = 80, mr = 30, mt = 30, mb = 60;

  double px(double u) const { return ml + u * (width - ml - mr); }
  double py(double v) const { return height - mb - v * (height - mt - mb); }

  std::string finish(const std::string& title) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    os << body.str();
    os << "</svg>\n";
    return os.str();
  }
};

}  // namespace svg_detail

// PET heatmap: one band per cell, color = |ZZ|max, line = |ZZZ|/|ZZ| ratio.
inline std::string pet_svg(const PetResult& r) {
  std::vector<std::string> cells;
  std::vector<double> xs;
  for (const auto& row : r.rows) {
    if (std::find(cells.begin(), cells.end(), row.cell) == cells.end())
      cells.push_back(row.cell);
    if (std::find(xs.begin(), xs.end(), row.x_value_mhz) == xs.end())
      xs.push_back(row.x_value_mhz);
  }
  std::sort(xs.begin(), xs.end());
  if (cells.empty() || xs.empty()) throw Error("empty PET dataset");

  double zmax = 1e-6;
  for (const auto& row : r.rows) zmax = std::max(zmax, row.zz_max_mhz);

  svg_detail::Chart c;
  const double band_h = (c.height - c.mt - c.mb) / cells.size();
  const double col_w = (c.width - c.ml - c.mr) / xs.size();
  for (const auto& row : r.rows) {
    if (!row.ok) continue;
    auto ci = std::find(cells.begin(), cells.end(), row.cell) - cells.begin();
    auto xi = std::find(xs.begin(), xs.end(), row.x_value_mhz) - xs.begin();
    double t = std::log10(std::max(row.zz_max_mhz, 1e-6) / 1e-6) /
               std::log10(zmax / 1e-6);
    c.body << "<rect class=\"pet-band\" x=\"" << c.ml + xi * col_w << "\" y=\""
           << c.mt + ci * band_h << "\" width=\"" << col_w << "\" height=\""
           << band_h << "\" fill=\"" << svg_detail::color_scale(t) << "\"/>\n";
  }
  // ratio polyline per cell band (ratio 1 sits mid-band) + labels
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    std::ostringstream pts;
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      for (const auto& row : r.rows)
        if (row.ok && row.cell == cells[ci] && row.x_value_mhz == xs[xi]) {
          double v = std::clamp(row.ratio / 2.0, 0.0, 1.0);
          pts << c.ml + (xi + 0.5) * col_w << ","
              << c.mt + (ci + 1 - v) * band_h << " ";
        }
    }
    c.body << "<polyline fill=\"none\" stroke=\"white\" stroke-width=\"1\" "
              "points=\"" << pts.str() << "\"/>\n";
    c.body << "<text x=\"8\" y=\"" << c.mt + (ci + 0.6) * band_h
           << "\" font-family=\"sans-serif\" font-size=\"9\">" << cells[ci]
           << "</text>\n";
  }
  return c.finish("Processor Error Tomography: color=|ZZ|max, line=|ZZZ|/|ZZ|");
}

// Generic multi-series line chart on log-y (used for overlay and phase).
struct Series {
  std::string name;
  std::vector<double> x, y;
};

inline std::string line_chart_svg(const std::vector<Series>& series,
                                  const std::string& title, bool logx,
                                  bool logy) {
  if (series.empty()) throw Error("empty chart dataset");
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-12)) : v; };
  auto ty = [&](double v) { return logy ? std::log10(std::max(std::abs(v), 1e-9)) : v; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;

  svg_detail::Chart c;
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  c.body << "<line x1=\"" << c.px(0) << "\" y1=\"" << c.py(0) << "\" x2=\""
         << c.px(1) << "\" y2=\"" << c.py(0) << "\" stroke=\"black\"/>\n";
  c.body << "<line x1=\"" << c.px(0) << "\" y1=\"" << c.py(0) << "\" x2=\""
         << c.px(0) << "\" y2=\"" << c.py(1) << "\" stroke=\"black\"/>\n";
  int k = 0;
  for (const auto& s : series) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      pts << c.px((tx(s.x[i]) - xmin) / (xmax - xmin)) << ","
          << c.py((ty(s.y[i]) - ymin) / (ymax - ymin)) << " ";
    c.body << "<polyline class=\"series\" fill=\"none\" stroke=\""
           << palette[k % 8] << "\" stroke-width=\"1.5\" points=\"" << pts.str()
           << "\"/>\n";
    c.body << "<text x=\"" << c.width - c.mr - 150 << "\" y=\""
           << c.mt + 14 * (k + 1) << "\" font-family=\"sans-serif\" "
           << "font-size=\"10\" fill=\"" << palette[k % 8] << "\">" << s.name
           << "</text>\n";
    ++k;
  }
  return c.finish(title);
}

inline std::string phase_svg(const PhaseScanResult& r) {
  Series zz{"|ZZ|max", {}, {}}, zzz{"|ZZZ|max", {}, {}};
  for (const auto& row : r.rows) {
    if (!row.ok) continue;
    zz.x.push_back(row.ratio);
    zz.y.push_back(row.zz_max_mhz);
    zzz.x.push_back(row.ratio);
    zzz.y.push_back(row.zzz_max_mhz);
  }
  std::ostringstream title;
  title << "phase scan: l2=" << std::setprecision(4) << r.fit_zz.exponent
        << ", l3=" << r.fit_zzz.exponent;
  if (r.crossover) title << ", crossover at " << r.crossover->ratio;
  return line_chart_svg({zz, zzz}, title.str(), true, true);
}

inline std::string overlay_svg(const OverlayResult& r) {
  std::map<std::string, Series> by_cell;
  for (const auto& row : r.rows) {
    if (!row.ok) continue;
    auto& s = by_cell[row.cell];
    s.name = row.cell;
    s.x.push_back(std::abs(row.j13_mhz));
    s.y.push_back(std::abs(row.z13_mhz));
  }
  std::vector<Series> series;
  for (auto& [name, s] : by_cell) series.push_back(std::move(s));
  return line_chart_svg(series, "Z1Z3 vs J13 overlay", false, true);
}

// ---- dataset file rendering --------------------------------------------------

// Renders a JSON dataset (as produced by the scan commands) into csv or svg.
// Returns the list of files written.
inline std::vector<std::string> report_render(const std::string& dataset_path,
                                              const std::string& format,
                                              const std::string& out_dir) {
  std::ifstream in(dataset_path);
  if (!in) throw Error("cannot open dataset '" + dataset_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid dataset JSON: ") + e.what());
  }
  const std::string kind = j.value("kind", "");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string path = out_dir + "/" + name;
    report_detail::write_file(path, content);
    written.push_back(path);
  };

  if (format == "json") {
    emit(kind + ".json", j.dump(2) + "\n");
    return written;
  }

  if (kind == "pet") {
    PetResult r;
    for (const auto& e : j.at("rows")) {
      PetRow row;
      row.cell = e.at("cell").get<std::string>();
      row.x_value_mhz = e.at("x_value").get<double>();
      row.j13_mhz = e.at("j13_MHz").get<double>();
      row.zz_max_mhz = e.at("zz_max_MHz").get<double>();
      row.zzz_max_mhz = e.at("zzz_max_MHz").get<double>();
      row.ratio = e.at("ratio").get<double>();
      row.ok = e.value("ok", true);
      r.rows.push_back(row);
    }
    if (format == "csv")
      emit("pet.csv", pet_csv(r));
    else if (format == "svg")
      emit("pet.svg", pet_svg(r));
    else
      throw Error("unknown format '" + format + "'");
    return written;
  }
  if (kind == "phase") {
    PhaseScanResult r;
    for (const auto& e : j.at("rows")) {
      PhaseScanRow row;
      row.ratio = e.at("ratio").get<double>();
      row.zz_max_mhz = e.at("zz_max_MHz").get<double>();
      row.zzz_max_mhz = e.at("zzz_max_MHz").get<double>();
      row.dominant_zz = e.at("dominant_zz_string").get<std::string>();
      row.dominant_zzz = e.at("dominant_zzz_string").get<std::string>();
      row.ok = e.value("ok", true);
      r.rows.push_back(row);
    }
    if (j.contains("fit_zz")) {
      r.fit_zz.exponent = j["fit_zz"].value("exponent", 0.0);
      r.fit_zzz.exponent = j["fit_zzz"].value("exponent", 0.0);
    }
    if (format == "csv")
      emit("phase.csv", phase_csv(r));
    else if (format == "svg")
      emit("phase.svg", phase_svg(r));
    else
      throw Error("unknown format '" + format + "'");
    return written;
  }
  if (kind == "overlay") {
    OverlayResult r;
    double gside = j.value("gside_MHz", 0.0);
    for (const auto& e : j.at("rows")) {
      OverlayRow row;
      row.cell = e.at("cell").get<std::string>();
      row.j13_target_mhz = e.at("j13_target_MHz").get<double>();
      row.j13_mhz = e.at("j13_MHz").get<double>();
      row.z13_mhz = e.at("z13_MHz").get<double>();
      row.z123_mhz = e.at("z123_MHz").get<double>();
      row.z134_mhz = e.at("z134_MHz").get<double>();
      row.z135_mhz = e.at("z135_MHz").get<double>();
      row.ok = e.value("ok", true);
      r.rows.push_back(row);
    }
    if (format == "csv")
      emit("overlay.csv", overlay_csv(r, gside));
    else if (format == "svg")
      emit("overlay.svg", overlay_svg(r));
    else
      throw Error("unknown format '" + format + "'");
    return written;
  }
  if (kind == "fidelity") {
    FidelitySweepResult r;
    for (const auto& e : j.at("reports")) {
      FidelityReport rep;
      rep.cell_label = e.at("cell").get<std::string>();
      rep.gside_mhz = e.at("gside_MHz").get<double>();
      rep.j_on_mhz = e.at("j_on_MHz").get<double>();
      rep.pulse_duration_ns = e.at("pulse_duration_ns").get<double>();
      rep.error_decoherence = e.at("error_decoherence").get<double>();
      rep.error_with_zz = e.at("error_with_zz").get<double>();
      rep.error_with_zzz = e.at("error_with_zzz").get<double>();
      r.reports.push_back(rep);
    }
    if (format == "csv")
      emit("fidelity.csv", fidelity_csv(r));
    else
      throw Error("fidelity datasets render to csv only");
    return written;
  }
  if (kind == "tomography") {
    TomographyResult r;
    r.cell = j.value("cell", "");
    for (const auto& e : j.at("rows")) {
      TomographyEntry t;
      t.j13_mhz = e.at("j13_MHz").get<double>();
      t.gside_mhz = e.at("gside_MHz").get<double>();
      t.pauli = e.at("string").get<std::string>();
      t.alpha_exact_mhz = e.at("alpha_exact_MHz").get<double>();
      t.alpha_pert2_mhz = e.at("alpha_pert2_MHz").get<double>();
      t.alpha_pert3_mhz = e.at("alpha_pert3_MHz").get<double>();
      r.rows.push_back(t);
    }
    if (format == "csv")
      emit("tomography.csv", tomography_csv(r));
    else
      throw Error("tomography datasets render to csv only");
    return written;
  }
  throw Error("dataset kind '" + kind + "' not recognized");
}

}  // namespace qcell
