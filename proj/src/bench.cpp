#include "stiffkit/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

namespace stiffkit {

Stepper stepper_for_name(const std::string& name) {
  if (name == "SDIRK3") return Stepper::sdirk3();
  if (name == "ERK3") return Stepper::explicit_rk(rk3_tableau(0.5, 0.75), "ERK3");
  return Stepper::msrktase(catalog_method(name));
}

std::vector<std::string> known_method_names() {
  std::vector<std::string> names;
  for (const auto& m : catalog()) names.push_back(m.name);
  names.push_back("SDIRK3");
  names.push_back("ERK3");
  return names;
}

SemiDiscreteProblem problem_for_name(const std::string& name, int n) {
  if (name == "diffusion") return diffusion_problem(n);
  if (name == "burgers") return burgers_problem(n);
  throw Error("unknown problem '" + name + "' (expected diffusion or burgers)");
}

Vec reference_state(const SemiDiscreteProblem& problem, double t0, double tf, double h_ref) {
  const IntegrationRun run =
      integrate(Stepper::sdirk3(), problem, t0, tf, h_ref, WStrategy::JacobianEveryStep);
  return run.y_final;
}

namespace {

BenchRow run_cell(const std::string& method, const SemiDiscreteProblem& problem,
                  const BenchConfig& config, double h, const Vec& reference) {
  BenchRow row;
  row.method = method;
  row.problem = config.problem;
  row.n = config.n;
  row.w_strategy = to_string(config.w_strategy);
  row.h = h;
  row.steps = std::max<long>(1, static_cast<long>(std::ceil((config.tf - config.t0) / h - 1e-9)));
  row.error = std::numeric_limits<double>::quiet_NaN();
  try {
    const IntegrationRun run = integrate(stepper_for_name(method), problem, config.t0, config.tf,
                                         h, config.w_strategy);
    Vec diff = run.y_final;
    axpy(-1.0, reference, diff);
    row.h = run.h;
    row.steps = run.steps;
    row.error = norm2(diff);
    row.seconds = run.wall_seconds;
    row.factorizations = run.factorizations;
    row.rhs_evals = run.rhs_evals;
    row.status = "ok";
  } catch (const NonFiniteState&) {
    row.status = "blowup";
  } catch (const NewtonDivergence&) {
    row.status = "newton-divergence";
  }
  return row;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  if (config.methods.empty()) throw Error("run_bench: no methods given");
  if (config.h_values.size() < 2) throw Error("run_bench: need at least 2 step sizes");

  const SemiDiscreteProblem problem = problem_for_name(config.problem, config.n);
  const double h_min = *std::min_element(config.h_values.begin(), config.h_values.end());
  const Vec reference =
      reference_state(problem, config.t0, config.tf, h_min / config.reference_refine);

  std::vector<std::pair<std::string, double>> cells;
  std::vector<double> hs = config.h_values;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  for (const auto& m : config.methods)
    for (double h : hs) cells.emplace_back(m, h);

  BenchReport report;
  report.rows.resize(cells.size());
  if (config.jobs > 1) {
    std::vector<std::future<BenchRow>> futures;
    futures.reserve(cells.size());
    for (const auto& [m, h] : cells)
      futures.push_back(std::async(std::launch::async, run_cell, m, std::cref(problem),
                                   std::cref(config), h, std::cref(reference)));
    for (size_t i = 0; i < futures.size(); ++i) report.rows[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < cells.size(); ++i)
      report.rows[i] = run_cell(cells[i].first, problem, config, cells[i].second, reference);
  }

  std::stable_sort(report.rows.begin(), report.rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.h > b.h;
  });
  return report;
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw Error("parse_double: bad number '" + s + "'");
  return v;
}

std::string bench_csv(const BenchReport& report) {
  std::string out = "method,problem,N,w_strategy,h,steps,error,seconds,factorizations,rhs_evals,status\n";
  for (const auto& r : report.rows) {
    out += r.method + ',' + r.problem + ',' + std::to_string(r.n) + ',' + r.w_strategy + ',' +
           format_double(r.h) + ',' + std::to_string(r.steps) + ',' + format_double(r.error) +
           ',' + format_double(r.seconds) + ',' + std::to_string(r.factorizations) + ',' +
           std::to_string(r.rhs_evals) + ',' + r.status + '\n';
  }
  return out;
}

BenchReport bench_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("bench_from_csv: empty input");
  BenchReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 11) throw Error("bench_from_csv: expected 11 columns");
    BenchRow r;
    r.method = fields[0];
    r.problem = fields[1];
    r.n = std::stoi(fields[2]);
    r.w_strategy = fields[3];
    r.h = parse_double(fields[4]);
    r.steps = std::stol(fields[5]);
    r.error = parse_double(fields[6]);
    r.seconds = parse_double(fields[7]);
    r.factorizations = std::stol(fields[8]);
    r.rhs_evals = std::stol(fields[9]);
    r.status = fields[10];
    report.rows.push_back(std::move(r));
  }
  return report;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
}

namespace {

const char* kPalette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d68910", "#16a085"};

struct LogAxis {
  double lo = 0, hi = 1;  // log10 range
  double pix0 = 0, pix1 = 1;

  double map(double value) const {
    const double t = (std::log10(value) - lo) / (hi - lo);
    return pix0 + t * (pix1 - pix0);
  }
};

void expand_log_range(double v, double& lo, double& hi) {
  if (!(v > 0) || !std::isfinite(v)) return;
  const double l = std::log10(v);
  lo = std::min(lo, l);
  hi = std::max(hi, l);
}

std::string tick_label(int decade) { return "1e" + std::to_string(decade); }

}  // namespace

std::string efficiency_svg(const BenchReport& report, const std::string& title) {
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  std::vector<std::string> methods;
  for (const auto& r : report.rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
    if (r.status != "ok") continue;
    expand_log_range(r.seconds, xlo, xhi);
    expand_log_range(r.error, ylo, yhi);
  }
  if (xlo > xhi) {
    xlo = -3;
    xhi = 0;
  }
  if (ylo > yhi) {
    ylo = -12;
    yhi = 0;
  }
  xlo = std::floor(xlo - 0.05);
  xhi = std::ceil(xhi + 0.05);
  ylo = std::floor(ylo - 0.05);
  yhi = std::ceil(yhi + 0.05);

  const double left = 80, right = 770, top = 50, bottom = 550;
  LogAxis xa{xlo, xhi, left, right};
  LogAxis ya{ylo, yhi, bottom, top};  // y grows downward in SVG

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">" << title
      << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(xlo); d <= static_cast<int>(xhi); ++d) {
    const double x = xa.map(std::pow(10.0, d));
    svg << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\""
        << bottom + 6 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << bottom + 22 << "\" text-anchor=\"middle\">"
        << tick_label(d) << "</text>\n";
  }
  for (int d = static_cast<int>(ylo); d <= static_cast<int>(yhi); ++d) {
    const double y = ya.map(std::pow(10.0, d));
    svg << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 10 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << tick_label(d) << "</text>\n";
  }
  svg << "<text x=\"425\" y=\"585\" text-anchor=\"middle\">wall seconds</text>\n";
  svg << "<text x=\"20\" y=\"300\" text-anchor=\"middle\" transform=\"rotate(-90 20 300)\">"
         "global error (2-norm)</text>\n";

  int color = 0;
  double legend_y = top + 10;
  for (const auto& method : methods) {
    const char* stroke = kPalette[color % 6];
    std::ostringstream pts;
    for (const auto& r : report.rows) {
      if (r.method != method || r.status != "ok") continue;
      if (!(r.error > 0) || !(r.seconds > 0)) continue;
      pts << xa.map(r.seconds) << ',' << ya.map(r.error) << ' ';
      svg << "<circle cx=\"" << xa.map(r.seconds) << "\" cy=\"" << ya.map(r.error)
          << "\" r=\"3\" fill=\"" << stroke << "\"/>\n";
    }
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<line x1=\"610\" y1=\"" << legend_y << "\" x2=\"640\" y2=\"" << legend_y
        << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"648\" y=\"" << legend_y + 4 << "\">" << method << "</text>\n";
    legend_y += 18;
    ++color;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string boundary_svg(const std::string& label,
                         const std::vector<std::complex<double>>& points) {
  double extent = 1.0;
  for (const auto& z : points)
    extent = std::max({extent, std::abs(z.real()), std::abs(z.imag())});
  extent *= 1.1;

  const double cx = 400, cy = 300, scale = 260.0 / extent;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg << "<line x1=\"60\" y1=\"" << cy << "\" x2=\"740\" y2=\"" << cy
      << "\" stroke=\"#888\"/>\n";
  svg << "<line x1=\"" << cx << "\" y1=\"40\" x2=\"" << cx << "\" y2=\"560\" stroke=\"#888\"/>\n";
  svg << "<text x=\"735\" y=\"" << cy - 8 << "\" text-anchor=\"end\">Re z</text>\n";
  svg << "<text x=\"" << cx + 8 << "\" y=\"52\">Im z</text>\n";
  svg << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">" << label
      << " stability boundary |R(z)| = 1</text>\n";
  const double unit = scale;  // pixels per unit in z
  svg << "<line x1=\"" << cx << "\" y1=\"" << cy + 5 << "\" x2=\"" << cx + unit << "\" y2=\""
      << cy + 5 << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << cx + unit / 2 << "\" y=\"" << cy + 20
      << "\" text-anchor=\"middle\">1</text>\n";
  for (const auto& z : points) {
    svg << "<circle cx=\"" << cx + scale * z.real() << "\" cy=\"" << cy - scale * z.imag()
        << "\" r=\"2\" fill=\"#c0392b\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace stiffkit
