#include "sacb/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sacb/error.hpp"

namespace sacb {

namespace fs = std::filesystem;

std::string format_significant(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto sci = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, digits - 1);
  const std::string s(buf, sci.ptr);
  const int exponent = std::stoi(s.substr(s.find('e') + 1));
  const int decimals = std::max(0, digits - 1 - exponent);
  auto fixed = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, fixed.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_significant(*v) : std::string(); }

std::string banner(const std::string& hash) { return std::string("# sacblab ") + kToolVersion + " config " + hash; }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc()) throw Error(ErrorKind::parse_error, "bad number '" + s + "' in results file");
  return v;
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::string compact_number(double v) {
  std::string s = format_significant(v);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

namespace {

std::string file_label(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.') c = '_';
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

}  // namespace

std::string results_header() {
  return "config_hash,instance,beta,tilde_beta,policy,T,reps,mean_regret,sd,ci95,mean_t_sacb,mean_beta_hat,"
         "relative_loss";
}

std::string format_row(const ResultRow& r) {
  std::ostringstream os;
  os << r.config_hash << ',' << r.instance << ',' << format_significant(r.beta) << ',' << opt(r.tilde_beta) << ','
     << r.policy << ',' << r.horizon << ',' << r.reps << ',' << format_significant(r.mean_regret) << ','
     << format_significant(r.sd) << ',' << opt(r.ci95) << ',' << opt(r.mean_t_sacb) << ',' << opt(r.mean_beta_hat)
     << ',' << opt(r.relative_loss);
  return os.str();
}

void write_results(const fs::path& file, const std::vector<ResultRow>& rows, const std::string& hash) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << banner(hash) << '\n' << results_header() << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

std::vector<ResultRow> read_results(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::parse_error, "cannot read " + file.string());
  std::vector<ResultRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != results_header()) throw Error(ErrorKind::parse_error, "unexpected results header");
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 13) throw Error(ErrorKind::parse_error, "results row with wrong field count");
    ResultRow r;
    r.config_hash = f[0];
    r.instance = f[1];
    r.beta = parse_double(f[2]);
    r.tilde_beta = parse_opt(f[3]);
    r.policy = f[4];
    r.horizon = static_cast<std::int64_t>(parse_double(f[5]));
    r.reps = static_cast<int>(parse_double(f[6]));
    r.mean_regret = parse_double(f[7]);
    r.sd = parse_double(f[8]);
    r.ci95 = parse_opt(f[9]);
    r.mean_t_sacb = parse_opt(f[10]);
    r.mean_beta_hat = parse_opt(f[11]);
    r.relative_loss = parse_opt(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void fill_relative_loss(std::vector<ResultRow>& rows, const std::vector<bool>& is_reference) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::optional<double> ref;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (is_reference[j] && rows[j].beta == rows[i].beta && rows[j].horizon == rows[i].horizon)
        ref = rows[j].mean_regret;
    if (ref && *ref != 0.0) rows[i].relative_loss = (rows[i].mean_regret - *ref) / *ref;
    else rows[i].relative_loss.reset();
  }
}

void write_series_csv(const fs::path& file, const PlotSeries& s, const std::string& hash) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << banner(hash) << '\n' << "x,mean,ci_lo,ci_hi\n";
  for (std::size_t k = 0; k < s.x.size(); ++k)
    out << format_significant(s.x[k]) << ',' << format_significant(s.mean[k]) << ',' << format_significant(s.ci_lo[k])
        << ',' << format_significant(s.ci_hi[k]) << '\n';
}

void write_svg(const fs::path& file, const std::string& title, const std::string& x_label,
               const std::vector<PlotSeries>& series, const std::string& hash) {
  constexpr double kW = 640, kH = 420, kLeft = 80, kRight = 180, kTop = 40, kBottom = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.ci_lo[k]);
      y1 = std::max(y1, s.ci_hi[k]);
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<!-- sacblab " << kToolVersion << " config " << hash << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
        << format_significant(xv, 3) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 3 << "\" font-size=\"10\" text-anchor=\"end\">"
        << format_significant(yv, 3) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10 << "\" font-size=\"12\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* c = colors[i % 7];
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) out << px(s.x[k]) << ',' << py(s.mean[k]) << ' ';
    out << "\"/>\n";
    for (std::size_t k = 0; k < s.x.size(); ++k)
      out << "<line x1=\"" << px(s.x[k]) << "\" y1=\"" << py(s.ci_lo[k]) << "\" x2=\"" << px(s.x[k]) << "\" y2=\""
          << py(s.ci_hi[k]) << "\" stroke=\"" << c << "\"/>\n";
    out << "<text x=\"" << kLeft + pw + 10 << "\" y=\"" << kTop + 14 * (i + 1) << "\" font-size=\"11\" fill=\"" << c
        << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

namespace {

PlotSeries series_from(const std::string& label, const std::vector<const ResultRow*>& rows,
                       const std::vector<double>& xs) {
  PlotSeries s{label, {}, {}, {}, {}};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double ci = rows[k]->ci95.value_or(0.0);
    s.x.push_back(xs[k]);
    s.mean.push_back(rows[k]->mean_regret);
    s.ci_lo.push_back(rows[k]->mean_regret - ci);
    s.ci_hi.push_back(rows[k]->mean_regret + ci);
  }
  return s;
}

}  // namespace

std::vector<fs::path> emit_plot_data(const std::vector<ResultRow>& rows, const std::string& figure,
                                     const fs::path& out_dir, const std::string& hash) {
  std::vector<fs::path> written;
  const fs::path data_dir = out_dir / "plotdata";
  const fs::path fig_dir = out_dir / "figures";
  std::set<std::pair<double, std::int64_t>> cells;
  for (const auto& r : rows) cells.insert({r.beta, r.horizon});

  if (figure == "regret_vs_tilde_beta") {
    for (const auto& [beta, horizon] : cells) {
      std::vector<const ResultRow*> swept;
      for (const auto& r : rows)
        if (r.beta == beta && r.horizon == horizon && r.tilde_beta) swept.push_back(&r);
      std::sort(swept.begin(), swept.end(), [](auto* a, auto* b) { return *a->tilde_beta < *b->tilde_beta; });
      if (swept.size() < 2) throw Error(ErrorKind::missing_axis, "regret_vs_tilde_beta needs a tilde_beta sweep");
      std::vector<double> xs;
      for (auto* r : swept) xs.push_back(*r->tilde_beta);
      std::vector<PlotSeries> series{series_from("ABSE(tilde beta)", swept, xs)};
      for (const auto& r : rows) {
        if (r.beta != beta || r.horizon != horizon) continue;
        const bool reference = r.relative_loss && *r.relative_loss == 0.0 && r.tilde_beta;
        if (r.policy != "SACB" && !reference) continue;
        std::vector<const ResultRow*> flat(xs.size(), &r);
        series.push_back(series_from(r.policy == "SACB" ? "SACB" : "ABSE(beta)", flat, xs));
      }
      const std::string stem = "regret_vs_tilde_beta_beta" + compact_number(beta) + "_T" + std::to_string(horizon);
      for (const auto& s : series) {
        const fs::path p = data_dir / (stem + "_" + file_label(s.label) + ".csv");
        write_series_csv(p, s, hash);
        written.push_back(p);
      }
      const fs::path svg = fig_dir / (stem + ".svg");
      write_svg(svg, "beta = " + compact_number(beta) + ", T = " + std::to_string(horizon), "tilde beta", series, hash);
      written.push_back(svg);
    }
  } else if (figure == "regret_vs_T") {
    std::set<std::int64_t> horizons;
    for (const auto& r : rows) horizons.insert(r.horizon);
    if (horizons.size() < 2) throw Error(ErrorKind::missing_axis, "regret_vs_T needs a T sweep");
    std::set<double> betas;
    for (const auto& r : rows) betas.insert(r.beta);
    for (double beta : betas) {
      std::vector<std::string> labels;
      for (const auto& r : rows)
        if (r.beta == beta && std::find(labels.begin(), labels.end(), r.policy) == labels.end())
          labels.push_back(r.policy);
      std::vector<PlotSeries> series;
      for (const auto& label : labels) {
        std::vector<const ResultRow*> pts;
        for (const auto& r : rows)
          if (r.beta == beta && r.policy == label) pts.push_back(&r);
        std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) { return a->horizon < b->horizon; });
        std::vector<double> xs;
        for (auto* r : pts) xs.push_back(static_cast<double>(r->horizon));
        series.push_back(series_from(label, pts, xs));
      }
      const std::string stem = "regret_vs_T_beta" + compact_number(beta);
      for (const auto& s : series) {
        const fs::path p = data_dir / (stem + "_" + file_label(s.label) + ".csv");
        write_series_csv(p, s, hash);
        written.push_back(p);
      }
      const fs::path svg = fig_dir / (stem + ".svg");
      write_svg(svg, "beta = " + compact_number(beta), "T", series, hash);
      written.push_back(svg);
    }
  } else {
    throw Error(ErrorKind::validation_error, "unknown figure kind '" + figure + "'");
  }
  return written;
}

void write_tables(const std::vector<ResultRow>& rows, const fs::path& out_dir, double scale, const std::string& hash) {
  std::vector<std::string> labels;
  std::vector<std::pair<double, std::int64_t>> cells;
  for (const auto& r : rows) {
    if (std::find(labels.begin(), labels.end(), r.policy) == labels.end()) labels.push_back(r.policy);
    const std::pair<double, std::int64_t> c{r.beta, r.horizon};
    if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
  }
  const fs::path dir = out_dir / "tables";
  fs::create_directories(dir);
  auto emit = [&](const std::string& name, auto value) {
    std::ofstream out(dir / name, std::ios::binary);
    out << banner(hash) << '\n' << "beta,T";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (const auto& [beta, horizon] : cells) {
      out << format_significant(beta) << ',' << horizon;
      for (const auto& l : labels) {
        out << ',';
        for (const auto& r : rows)
          if (r.beta == beta && r.horizon == horizon && r.policy == l) out << value(r);
      }
      out << '\n';
    }
  };
  emit("regret.csv", [](const ResultRow& r) { return format_significant(r.mean_regret); });
  emit("regret_scaled.csv", [&](const ResultRow& r) { return format_significant(r.mean_regret / scale, 3); });
  emit("relative_loss.csv", [](const ResultRow& r) { return opt(r.relative_loss); });
}

}  // namespace sacb
