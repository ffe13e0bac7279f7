#include "fsis/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fsis {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json json_number(double v, bool* nan_flag) {
  if (std::isnan(v)) {
    if (nan_flag) *nan_flag = true;
    return Json("nan");
  }
  return Json(v);
}

std::string to_csv(const EnergyTrace& trace) {
  std::string out =
      "t,E,D,l_defect,fluid,iface_kinetic,iface_elastic,solid_kinetic,solid_elastic\n";
  for (Index n = 0; n < trace.t.size(); ++n) {
    out += fmt17(trace.t(n)) + "," + fmt17(trace.E(n)) + "," + fmt17(trace.D(n)) + "," +
           fmt17(trace.ldef(n));
    for (int c = 0; c < 5; ++c) out += "," + fmt17(trace.comp(n, c));
    out += "\n";
  }
  return out;
}

std::string to_csv(const SpectrumReport& report) {
  std::string out = "re,im,residual\n";
  for (Index k = 0; k < report.eigenvalues.size(); ++k)
    out += fmt17(report.eigenvalues(k).real()) + "," + fmt17(report.eigenvalues(k).imag()) + "," +
           fmt17(report.residuals(k)) + "\n";
  return out;
}

std::string to_csv(const ScanResult& scan) {
  std::string out = "beta,resolvent_norm,singular\n";
  for (Index k = 0; k < scan.beta.size(); ++k)
    out += fmt17(scan.beta(k)) + "," + fmt17(scan.norms(k)) + "," +
           std::to_string(int(scan.singular[static_cast<size_t>(k)])) + "\n";
  return out;
}

std::string to_csv(const AssumptionReport& report) {
  std::string out = "k,beta_sq,c_k,delta_k\n";
  for (size_t k = 0; k < report.modes.size(); ++k)
    out += std::to_string(k) + "," + fmt17(report.modes[k].beta2) + "," +
           fmt17(report.modes[k].c) + "," + fmt17(report.modes[k].delta) + "\n";
  return out;
}

Json to_json(const SpectrumReport& report, bool* nan_flag) {
  Json j;
  j["dense"] = report.dense;
  j["shift"] = {json_number(report.shift.real(), nan_flag),
                json_number(report.shift.imag(), nan_flag)};
  j["gap_tol"] = report.gap_tol;
  j["count"] = report.eigenvalues.size();
  j["near_zero_count"] = report.near_zero_count;
  j["near_axis_count"] = report.near_axis_count;
  j["abscissa_excl_zero"] = json_number(report.abscissa_excl_zero, nan_flag);
  j["gap"] = json_number(report.gap, nan_flag);
  double maxres = 0;
  for (Index k = 0; k < report.residuals.size(); ++k)
    if (!std::isnan(report.residuals(k))) maxres = std::max(maxres, report.residuals(k));
  j["max_residual"] = json_number(maxres, nan_flag);
  return j;
}

Json to_json(const AssumptionReport& report, bool* nan_flag) {
  Json j;
  j["tol"] = report.tol;
  j["holds"] = report.holds;
  j["violated_at"] = report.violated_at;
  Json modes = Json::array();
  for (size_t k = 0; k < report.modes.size(); ++k)
    modes.push_back({{"k", k},
                     {"beta_sq", json_number(report.modes[k].beta2, nan_flag)},
                     {"c", json_number(report.modes[k].c, nan_flag)},
                     {"delta", json_number(report.modes[k].delta, nan_flag)}});
  j["modes"] = modes;
  return j;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::JsonFormat;
  if (name == "csv") return ReportFormat::CsvFormat;
  throw ConfigError("unsupported report format '" + name + "' (expected json or csv)");
}

std::string serialize_report(const SpectrumReport& report, ReportFormat format, bool* nan_flag) {
  if (format == ReportFormat::CsvFormat) {
    for (Index k = 0; k < report.residuals.size(); ++k)
      if (nan_flag && std::isnan(report.residuals(k))) *nan_flag = true;
    return to_csv(report);
  }
  Json j = to_json(report, nan_flag);
  Json evs = Json::array();
  for (Index k = 0; k < report.eigenvalues.size(); ++k)
    evs.push_back({json_number(report.eigenvalues(k).real(), nan_flag),
                   json_number(report.eigenvalues(k).imag(), nan_flag),
                   json_number(report.residuals(k), nan_flag)});
  j["eigenvalues"] = evs;
  return j.dump(2) + "\n";
}

std::string serialize_report(const EnergyTrace& trace, ReportFormat format, bool* nan_flag) {
  if (nan_flag)
    for (Index n = 0; n < trace.E.size(); ++n)
      if (std::isnan(trace.E(n)) || std::isnan(trace.D(n))) *nan_flag = true;
  if (format == ReportFormat::CsvFormat) return to_csv(trace);
  Json j;
  j["steps"] = trace.steps;
  Json rows = Json::array();
  for (Index n = 0; n < trace.t.size(); ++n) {
    Json row = {{"t", json_number(trace.t(n), nullptr)},
                {"E", json_number(trace.E(n), nullptr)},
                {"D", json_number(trace.D(n), nullptr)},
                {"l_defect", json_number(trace.ldef(n), nullptr)}};
    rows.push_back(row);
  }
  j["trace"] = rows;
  return j.dump(2) + "\n";
}

SpectrumReport parse_spectrum_csv(const std::string& text) {
  SpectrumReport rep;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "re,im,residual")
    throw Error("parse_spectrum_csv: bad header");
  std::vector<Complex> evs;
  std::vector<double> res;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double re, im, r;
    char c1, c2;
    std::istringstream ls(line);
    if (!(ls >> re >> c1 >> im >> c2 >> r)) {
      // allow nan tokens
      std::string a, b, c;
      std::istringstream ls2(line);
      std::getline(ls2, a, ',');
      std::getline(ls2, b, ',');
      std::getline(ls2, c, ',');
      re = std::strtod(a.c_str(), nullptr);
      im = std::strtod(b.c_str(), nullptr);
      r = std::strtod(c.c_str(), nullptr);
    }
    evs.emplace_back(re, im);
    res.push_back(r);
  }
  rep.eigenvalues.resize(static_cast<Index>(evs.size()));
  rep.residuals.resize(static_cast<Index>(res.size()));
  for (size_t i = 0; i < evs.size(); ++i) {
    rep.eigenvalues(static_cast<Index>(i)) = evs[i];
    rep.residuals(static_cast<Index>(i)) = res[i];
  }
  return rep;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace fsis
