#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsp/run.hpp"

namespace rsp::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + fmt(values[i]);
  return out;
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? ";" : "") + std::to_string(values[i]);
  return out;
}

nlohmann::json certificate_json(const certify::GuaranteeCertificate& cert) {
  return nlohmann::json::parse(certify::certificate_to_json_text(cert));
}

nlohmann::json plan_json(const robust::StoragePlan& plan) {
  return nlohmann::json::parse(robust::plan_to_json_text(plan));
}

// Minimal deterministic SVG line/bar canvas. Coordinates are emitted with
// fixed precision so identical inputs yield identical bytes.
struct Svg {
  std::string body;
  double width, height;

  Svg(double w, double h) : width(w), height(h) {
    body += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(w) + "\" height=\"" +
            fmt2(h) + "\" viewBox=\"0 0 " + fmt2(w) + " " + fmt2(h) + "\">\n";
    body += "<rect x=\"0\" y=\"0\" width=\"" + fmt2(w) + "\" height=\"" + fmt2(h) +
            "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0, bool dashed = false) {
    body += "<line x1=\"" + fmt2(x1) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" + fmt2(x2) +
            "\" y2=\"" + fmt2(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
            fmt2(stroke_width) + "\"";
    if (dashed) body += " stroke-dasharray=\"6 4\"";
    body += "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" + fmt2(w) +
            "\" height=\"" + fmt2(h) + "\" fill=\"" + fill + "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill) {
    body += "<circle cx=\"" + fmt2(x) + "\" cy=\"" + fmt2(y) + "\" r=\"" + fmt2(r) +
            "\" fill=\"" + fill + "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    if (pts.size() < 2) return;
    body += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body += ' ';
      body += fmt2(pts[i].first) + "," + fmt2(pts[i].second);
    }
    body += "\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 11.0,
            const std::string& anchor = "start", const std::string& fill = "#333") {
    body += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" font-family=\"sans-serif\" " +
            "font-size=\"" + fmt2(size) + "\" text-anchor=\"" + anchor + "\" fill=\"" + fill +
            "\">" + s + "</text>\n";
  }

  std::string finish() { return body + "</svg>\n"; }
};

struct Frame {
  double x0 = 60, y0 = 20, x1 = 620, y1 = 350;  // plot area in a 640x400 canvas
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); }
  double py(double y) const { return y1 - (y - ymin) / (ymax - ymin) * (y1 - y0); }
};

void draw_axes(Svg& svg, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  svg.line(f.x0, f.y1, f.x1, f.y1, "#333");
  svg.line(f.x0, f.y0, f.x0, f.y1, "#333");
  svg.text((f.x0 + f.x1) / 2, f.y1 + 34, x_label, 12, "middle");
  svg.text(14, (f.y0 + f.y1) / 2, y_label, 12, "middle", "#333");
}

void y_ticks(Svg& svg, const Frame& f, int n = 4) {
  for (int i = 0; i <= n; ++i) {
    const double v = f.ymin + (f.ymax - f.ymin) * i / n;
    const double y = f.py(v);
    svg.line(f.x0 - 4, y, f.x0, y, "#333");
    svg.text(f.x0 - 7, y + 4, fmt(v), 10, "end");
  }
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  write_text_atomic(path, content);
  written.push_back(path);
}

std::string experiments_csv(const ExperimentReport& report) {
  std::string out =
      "index,seed,ok,error,kind,mode,K,k_or_d,s_bar,epsilon,beta,eps_bar,gamma,objective,"
      "investment,essential_size,epsilon_hat,passes,energy_mwh,power_mw,units\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.index) + ',' + std::to_string(r.seed) + ',' +
           (r.ok ? "1" : "0") + ',' + csv_quote(r.error) + ',' +
           kind_to_string(report.config.kind) + ',';
    if (r.ok) {
      out += std::string(certify::to_string(r.certificate.mode)) + ',' +
             std::to_string(r.certificate.K) + ',' + std::to_string(r.certificate.k_or_d) + ',' +
             (r.certificate.s_bar ? std::to_string(*r.certificate.s_bar) : std::string()) + ',' +
             fmt(r.certificate.epsilon) + ',' + fmt(r.certificate.beta) + ',' +
             fmt(report.config.eps_bar) + ',' + fmt(r.gamma) + ',' + fmt(r.objective) + ',' +
             fmt(r.investment) + ',' + std::to_string(r.essential_size) + ',' +
             (r.epsilon_hat >= 0.0 ? fmt(r.epsilon_hat) : std::string()) + ',' +
             std::to_string(r.passes) + ',' + join(r.plan.energy) + ',' + join(r.plan.power) +
             ',' + join(r.plan.units);
    } else {
      out += ",,,,,," + fmt(report.config.eps_bar) + ",,,,,,,,,";
    }
    out += '\n';
  }
  out += "summary,selected=" +
         (report.selected >= 0 ? std::to_string(report.selected) : std::string("none")) + ',' +
         csv_quote(report.selection_rule) + '\n';
  return out;
}

std::string certify_csv(const ExperimentReport& report) {
  std::string out = "index,mode,epsilon,beta,K,k_or_d,s_bar,consistent\n";
  for (const auto& r : report.rows) {
    if (!r.ok) continue;
    out += std::to_string(r.index) + ',' + certify::to_string(r.certificate.mode) + ',' +
           fmt(r.certificate.epsilon) + ',' + fmt(r.certificate.beta) + ',' +
           std::to_string(r.certificate.K) + ',' + std::to_string(r.certificate.k_or_d) + ',' +
           (r.certificate.s_bar ? std::to_string(*r.certificate.s_bar) : std::string()) + ',' +
           (certify::certificate_consistent(r.certificate) ? "1" : "0") + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out = "budget,gamma_star,epsilon_hat,investment\n";
  for (const auto& p : report.points) {
    out += fmt(p.budget) + ',' + fmt(p.gamma_star) + ',' +
           (p.epsilon_hat >= 0.0 ? fmt(p.epsilon_hat) : std::string()) + ',' +
           fmt(p.investment) + '\n';
  }
  return out;
}

std::string investment_svg(const ExperimentReport& report) {
  Svg svg(640, 400);
  Frame f;
  const int n = static_cast<int>(report.rows.size());
  double vmax = 0.0;
  for (const auto& r : report.rows)
    if (r.ok) vmax = std::max(vmax, r.investment);
  if (vmax <= 0.0) vmax = 1.0;
  f.xmin = -0.5;
  f.xmax = n - 0.5;
  f.ymin = 0.0;
  f.ymax = vmax * 1.1;
  draw_axes(svg, f, "experiment", "investment $/yr");
  y_ticks(svg, f);
  const double slot = (f.x1 - f.x0) / n;
  for (const auto& r : report.rows) {
    const double cx = f.px(static_cast<double>(r.index));
    if (!r.ok) {
      svg.text(cx, f.y1 - 6, "x", 12, "middle", "#c00");
      continue;
    }
    const double h = f.y1 - f.py(r.investment);
    const bool selected = r.index == report.selected;
    svg.rect(cx - slot * 0.35, f.py(r.investment), slot * 0.7, h,
             selected ? "#2b7" : "#48c");
    svg.text(cx, f.y1 + 14, std::to_string(r.index), 10, "middle");
  }
  svg.text(f.x0, 14, "investment per experiment (selected in green)", 12);
  return svg.finish();
}

std::string epsilon_svg(const ExperimentReport& report) {
  Svg svg(640, 400);
  Frame f;
  const int n = static_cast<int>(report.rows.size());
  double emax = report.config.eps_bar;
  for (const auto& r : report.rows)
    if (r.ok && r.epsilon_hat >= 0.0) emax = std::max(emax, r.epsilon_hat);
  f.xmin = -0.5;
  f.xmax = n - 0.5;
  f.ymin = 0.0;
  f.ymax = emax * 1.25;
  draw_axes(svg, f, "experiment", "violation estimate");
  y_ticks(svg, f);
  const double yref = f.py(report.config.eps_bar);
  svg.line(f.x0, yref, f.x1, yref, "#c00", 1.0, true);
  svg.text(f.x1, yref - 5, "eps_bar=" + fmt(report.config.eps_bar), 10, "end", "#c00");
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : report.rows) {
    if (!r.ok || r.epsilon_hat < 0.0) continue;
    const double cx = f.px(static_cast<double>(r.index));
    pts.emplace_back(cx, f.py(r.epsilon_hat));
    svg.circle(cx, f.py(r.epsilon_hat), 3.0, "#48c");
    svg.text(cx, f.y1 + 14, std::to_string(r.index), 10, "middle");
  }
  svg.polyline(pts, "#48c");
  svg.text(f.x0, 14, "out-of-sample violation frequency per experiment", 12);
  return svg.finish();
}

std::string sweep_svg(const SweepReport& report) {
  Svg svg(640, 400);
  Frame f;
  double bmin = report.points.front().budget;
  double bmax = report.points.back().budget;
  if (bmax <= bmin) bmax = bmin + 1.0;
  double gmax = 0.0;
  double emax = report.config.eps_bar;
  for (const auto& p : report.points) {
    gmax = std::max(gmax, p.gamma_star);
    if (p.epsilon_hat >= 0.0) emax = std::max(emax, p.epsilon_hat);
  }
  if (gmax <= 0.0) gmax = 1.0;
  f.xmin = bmin;
  f.xmax = bmax;
  f.ymin = 0.0;
  f.ymax = gmax * 1.1;
  draw_axes(svg, f, "budget $/yr", "gamma* MWh");
  y_ticks(svg, f);

  // Right-hand axis for the violation estimate.
  Frame fe = f;
  fe.ymax = emax * 1.25;
  svg.line(f.x1, f.y0, f.x1, f.y1, "#333");
  for (int i = 0; i <= 4; ++i) {
    const double v = fe.ymin + (fe.ymax - fe.ymin) * i / 4;
    const double y = fe.py(v);
    svg.line(f.x1, y, f.x1 + 4, y, "#333");
    svg.text(f.x1 + 6, y + 4, fmt(v), 10, "start");
  }

  std::vector<std::pair<double, double>> gpts, epts;
  for (const auto& p : report.points) {
    const double x = f.px(p.budget);
    svg.line(x, f.y1, x, f.y1 + 4, "#333");
    svg.text(x, f.y1 + 14, fmt(p.budget), 9, "middle");
    gpts.emplace_back(x, f.py(p.gamma_star));
    svg.circle(x, f.py(p.gamma_star), 3.0, "#48c");
    if (p.epsilon_hat >= 0.0) {
      epts.emplace_back(x, fe.py(p.epsilon_hat));
      svg.circle(x, fe.py(p.epsilon_hat), 3.0, "#e80");
    }
  }
  svg.polyline(gpts, "#48c");
  svg.polyline(epts, "#e80");
  const double yref = fe.py(report.config.eps_bar);
  svg.line(f.x0, yref, f.x1, yref, "#c00", 1.0, true);
  svg.text(f.x1 - 4, yref - 5, "eps_bar=" + fmt(report.config.eps_bar), 10, "end", "#c00");
  svg.text(f.x0, 14, "worst-case curtailment (blue) and violation estimate (orange) vs budget", 12);
  return svg.finish();
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + target.parent_path().string());
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path);
}

std::string experiment_report_to_json_text(const ExperimentReport& report) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_to_json_text(report.config));
  j["selection"]["selected"] = report.selected;
  j["selection"]["rule"] = report.selection_rule;
  j["experiments"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["index"] = r.index;
    row["seed"] = r.seed;
    row["ok"] = r.ok;
    if (!r.ok) {
      row["error"] = r.error;
    } else {
      row["gamma"] = r.gamma;
      row["objective"] = r.objective;
      row["investment"] = r.investment;
      row["essential_size"] = r.essential_size;
      row["certificate"] = certificate_json(r.certificate);
      if (r.epsilon_hat >= 0.0) row["epsilon_hat"] = r.epsilon_hat;
      row["passes"] = r.passes;
      row["plan"] = plan_json(r.plan);
    }
    j["experiments"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string sweep_report_to_json_text(const SweepReport& report) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(config_to_json_text(report.config));
  j["zero_index"] = report.zero_index;
  j["zero_tol"] = report.zero_tol;
  j["points"] = nlohmann::json::array();
  for (const auto& p : report.points) {
    nlohmann::json row;
    row["budget"] = p.budget;
    row["gamma_star"] = p.gamma_star;
    if (p.epsilon_hat >= 0.0) row["epsilon_hat"] = p.epsilon_hat;
    row["investment"] = p.investment;
    j["points"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> emit_reports(const ExperimentReport& report, const std::string& out_dir) {
  std::vector<std::string> written;
  const fs::path dir(out_dir);
  write_file((dir / "experiments.json").string(), experiment_report_to_json_text(report), written);
  write_file((dir / "experiments.csv").string(), experiments_csv(report), written);
  write_file((dir / "certify.csv").string(), certify_csv(report), written);
  if (!report.rows.empty()) {
    write_file((dir / "investment.svg").string(), investment_svg(report), written);
    bool any_eps = false;
    for (const auto& r : report.rows) any_eps = any_eps || (r.ok && r.epsilon_hat >= 0.0);
    if (any_eps) write_file((dir / "epsilon.svg").string(), epsilon_svg(report), written);
  }
  return written;
}

std::vector<std::string> emit_reports(const SweepReport& report, const std::string& out_dir) {
  std::vector<std::string> written;
  const fs::path dir(out_dir);
  write_file((dir / "sweep.json").string(), sweep_report_to_json_text(report), written);
  write_file((dir / "sweep.csv").string(), sweep_csv(report), written);
  if (!report.points.empty())
    write_file((dir / "sweep.svg").string(), sweep_svg(report), written);
  return written;
}

}  // namespace rsp::cli
