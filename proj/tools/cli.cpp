#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "paramp/config.hpp"
#include "paramp/detection.hpp"
#include "paramp/field_io.hpp"
#include "paramp/modes.hpp"
#include "paramp/propagation.hpp"
#include "paramp/transfer.hpp"

namespace paramp::cli {
namespace {

struct Options {
  std::string config;
  std::vector<std::string> emit;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  std::optional<std::string> geometry;
  std::optional<double> threshold;
  std::optional<int> pmax;
  std::optional<int> lmax;
  std::optional<double> waist;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string short_g(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double max_of(const RealField& f) { return *std::max_element(f.values().begin(), f.values().end()); }
double min_of(const RealField& f) { return *std::min_element(f.values().begin(), f.values().end()); }

// Loaded scenario with command-line overrides applied.
struct Context {
  Scenario sc;
  std::vector<std::string> emit;
  std::filesystem::path out_dir;
  bool both_geometries = false;

  bool wants(const std::string& artifact) const {
    return std::find(emit.begin(), emit.end(), artifact) != emit.end();
  }
};

Context load(const Options& opt, bool allow_both) {
  Context ctx{load_scenario(opt.config), {}, {}};
  auto& sc = ctx.sc;
  if (opt.geometry) {
    if (*opt.geometry == "both") {
      if (!allow_both) {
        throw Error(ErrorCode::InvalidConfig, "--geometry both is only valid for amplify");
      }
      ctx.both_geometries = true;
    } else {
      sc.cavity = sc.cavity.with_geometry(parse_geometry(*opt.geometry));
    }
  }
  if (opt.threshold) sc.validity_threshold = *opt.threshold;
  if (opt.seed) sc.seed = *opt.seed;
  if (opt.shots) {
    if (*opt.shots < 1) throw Error(ErrorCode::InvalidConfig, "--shots must be >= 1");
    sc.shots = *opt.shots;
  }
  if (opt.pmax) sc.modes.pmax = *opt.pmax;
  if (opt.lmax) sc.modes.lmax = *opt.lmax;
  if (opt.waist) sc.modes.waist = *opt.waist;
  ctx.emit = opt.emit.empty() ? sc.emit : opt.emit;
  std::erase_if(ctx.emit, [](const std::string& a) { return a.empty(); });
  ctx.out_dir = opt.out_dir ? std::filesystem::path(*opt.out_dir) : sc.out_dir;
  if (!ctx.emit.empty()) std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

void emit_field(const Context& ctx, const std::string& name, const RealField& field,
                std::ostream& out) {
  write_csv(ctx.out_dir / (name + ".csv"), field, name);
  write_pgm(ctx.out_dir / (name + ".pgm"), field, name);
  out << "wrote " << (ctx.out_dir / (name + ".csv")).string() << '\n';
}

RealField masked_values(const MaskedField& f) { return f.values(); }

RealField mask_field(const MaskedField& f) {
  std::vector<double> m(f.grid().size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = f.valid(k) ? 1.0 : 0.0;
  return RealField(f.grid(), std::move(m));
}

ValidityFigure scenario_validity(const Scenario& sc, const RealField& object) {
  double peak = 0.0;
  for (double s : object.values()) peak = std::max(peak, s * s);
  return validity_figure(peak, sc.train, sc.cavity, sc.validity_threshold);
}

void print_validity(const ValidityFigure& v, std::ostream& out) {
  out << "validity_figure=" << (v.pupil_defined ? short_g(v.value) : std::string("inf")) << " ("
      << to_string(v.verdict()) << ", threshold " << short_g(v.threshold, 6);
  if (!v.pupil_defined) out << ", infinite pupil";
  out << ")\n";
}

void print_header(const Scenario& sc, std::ostream& out) {
  out << "geometry=" << to_string(sc.cavity.geometry()) << '\n';
  out << "rho0=" << sci(sc.train.rho0()) << " m\n";
}

// Location of the smallest sample, as a radius.
double argmin_radius(const RealField& f) {
  const auto it = std::min_element(f.values().begin(), f.values().end());
  const auto k = static_cast<std::size_t>(it - f.values().begin());
  const auto& g = f.grid();
  return g.radius(k % g.n(), k / g.n());
}

int cmd_validate(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, false);
  const auto& sc = ctx.sc;
  const auto object = make_object(sc);
  out << "config OK: " << opt.config << '\n';
  print_header(sc, out);
  out << "k=" << sci(sc.train.wavenumber()) << " 1/m\n";
  out << "grid n=" << sc.grid.n() << " spacing=" << sci(sc.grid.spacing()) << " m\n";
  print_validity(scenario_validity(sc, object), out);
  out << "long_window=" << (sc.detector.long_window(sc.cavity.gamma()) ? "yes" : "no")
      << " (T_d*gamma=" << short_g(sc.detector.window() * sc.cavity.gamma()) << ")\n";
  return kExitOk;
}

int cmd_gain_map(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, false);
  const auto& sc = ctx.sc;
  const auto g = gain_map(sc.cavity, sc.train, sc.grid);
  print_header(sc, out);
  out << "peak G=" << fixed6(max_of(g)) << '\n';
  out << "min G=" << fixed6(min_of(g)) << '\n';
  if (ctx.wants("gain-map")) emit_field(ctx, "gain-map", g, out);
  return kExitOk;
}

int cmd_noise_map(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, false);
  const auto& sc = ctx.sc;
  const auto f = noise_figure_map(sc.cavity, sc.train, sc.grid, sc.detector.eta());
  print_header(sc, out);
  out << "min F=" << fixed6(min_of(f)) << '\n';
  out << "max F=" << fixed6(max_of(f)) << '\n';
  out << "min F radius=" << sci(argmin_radius(f)) << " m\n";
  if (ctx.wants("noise-map")) emit_field(ctx, "noise-map", f, out);
  return kExitOk;
}

void emit_image(const Context& ctx, const PropagationResult& r, const std::string& suffix,
                std::ostream& out) {
  if (!ctx.wants("image")) return;
  emit_field(ctx, "image-magnitude" + suffix, magnitude(r.image), out);
  emit_field(ctx, "image-phase" + suffix, phase(r.image), out);
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& out) {
  for (const auto& w : warnings) out << "warning: " << w << '\n';
}

int cmd_amplify(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, true);
  const auto& sc = ctx.sc;
  const auto object = to_complex(make_object(sc));
  const auto& grid = sc.grid;
  const std::size_t c = grid.origin();

  if (!ctx.both_geometries) {
    const auto r = amplify(object, sc.cavity, sc.train, 0.0, sc.validity_threshold);
    print_header(sc, out);
    out << "on_axis |e|=" << sci(std::abs(r.image.at(c, c))) << '\n';
    out << "on_axis amplification=" << fixed6(std::abs(r.image.at(c, c)) /
                                             std::max(std::abs(object.at(c, c)), 1e-300))
        << '\n';
    print_validity(r.validity, out);
    print_warnings(r.warnings, out);
    emit_image(ctx, r, "", out);
    return kExitOk;
  }

  const auto planar = amplify_planar(object, sc.cavity, sc.train, 0.0, sc.validity_threshold);
  const auto confocal = amplify_confocal(object, sc.cavity, sc.train, 0.0, sc.validity_threshold);
  out << "geometry=both\n";
  out << "rho0=" << sci(sc.train.rho0()) << " m\n";
  out << "planar on_axis |e|=" << sci(std::abs(planar.image.at(c, c))) << '\n';
  out << "confocal on_axis |e|=" << sci(std::abs(confocal.image.at(c, c))) << '\n';
  out << "l2_difference=" << sci(relative_l2_difference(planar.image, confocal.image)) << '\n';
  out << "on_axis_difference="
      << sci(std::abs(planar.image.at(c, c) - confocal.image.at(c, c)) /
             std::max(std::abs(confocal.image.at(c, c)), 1e-300))
      << '\n';
  print_validity(confocal.validity, out);
  print_warnings(planar.warnings, out);
  print_warnings(confocal.warnings, out);
  emit_image(ctx, planar, "-planar", out);
  emit_image(ctx, confocal, "-confocal", out);
  return kExitOk;
}

struct DetectionRun {
  TransferMaps maps;
  DetectionReport report;
  MaskedField empirical_f;
};

DetectionRun run_detection(const Scenario& sc, const RealField& object) {
  auto maps = transfer_maps(sc.cavity, sc.train, sc.grid);
  auto report = detect(object, maps, sc.detector, scenario_validity(sc, object), sc.cavity.gamma());
  auto f = noise_figure_empirical(report);
  return {std::move(maps), std::move(report), std::move(f)};
}

void emit_report(const Context& ctx, const DetectionRun& d, std::ostream& out) {
  if (!ctx.wants("report")) return;
  emit_field(ctx, "image-mean", d.report.image_mean, out);
  emit_field(ctx, "image-variance", d.report.image_variance, out);
  emit_field(ctx, "image-snr", masked_values(d.report.image_snr), out);
  emit_field(ctx, "object-snr", masked_values(d.report.object_snr), out);
  emit_field(ctx, "noise-figure", masked_values(d.empirical_f), out);
  emit_field(ctx, "noise-figure-mask", mask_field(d.empirical_f), out);
}

void print_monte_carlo(const Scenario& sc, const DetectionRun& d, const MonteCarloResult& mc,
                       std::ostream& out) {
  const auto& grid = sc.grid;
  std::size_t inside = 0;
  std::size_t counted = 0;
  double f_sum = 0.0;
  double f_ref = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!d.empirical_f.valid(k) || mc.variance[k] <= 0.0) continue;
    ++counted;
    const bool mean_ok =
        std::abs(mc.mean[k] - d.report.image_mean[k]) <= 3.0 * mc.mean_stderr[k];
    const bool var_ok =
        std::abs(mc.variance[k] - d.report.image_variance[k]) <= 3.0 * mc.variance_stderr[k];
    if (mean_ok && var_ok) ++inside;
    const double r_image = mc.mean[k] * mc.mean[k] / mc.variance[k];
    f_sum += d.report.object_snr.values()[k] / r_image;
    f_ref += d.empirical_f.values()[k];
  }
  out << "shots=" << mc.shots << " seed=" << sc.seed << '\n';
  if (counted == 0) {
    out << "no unmasked pixels\n";
    return;
  }
  out << "within_3se_fraction=" << fixed6(static_cast<double>(inside) / counted) << '\n';
  out << "mean F_sampled=" << fixed6(f_sum / counted) << '\n';
  out << "mean F_analytic=" << fixed6(f_ref / counted) << '\n';
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, false);
  const auto& sc = ctx.sc;
  const auto object = make_object(sc);
  const auto d = run_detection(sc, object);
  const auto mc = monte_carlo_image(d.report.image_mean, d.report.image_variance, sc.seed, sc.shots);
  print_header(sc, out);
  print_monte_carlo(sc, d, mc, out);
  print_validity(d.report.validity, out);
  print_warnings(mc.warnings, out);
  if (ctx.wants("counts")) emit_field(ctx, "counts", mc.last_sample, out);
  if (ctx.wants("mc-stats")) {
    emit_field(ctx, "mc-mean", mc.mean, out);
    emit_field(ctx, "mc-variance", mc.variance, out);
  }
  emit_report(ctx, d, out);
  return kExitOk;
}

int cmd_modes(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, false);
  const auto& sc = ctx.sc;
  const double waist = sc.modes.waist.value_or(sc.train.rho0());
  const ModeBasis basis(waist, sc.modes.pmax, sc.modes.lmax, sc.grid);
  const auto diag = gram_diagnostics(basis);
  out << "waist=" << sci(waist) << " m\n";
  out << "pmax=" << basis.pmax() << " lmax=" << basis.lmax() << " modes=" << basis.size() << '\n';
  out << "gram_max_deviation=" << sci(diag.max_deviation) << '\n';
  out << "gram_max_offdiag=" << sci(diag.max_off_diagonal) << '\n';
  out << "gram_max_norm_error=" << sci(diag.max_norm_error) << '\n';
  out << "orthonormal=" << (diag.max_deviation < 1e-6 ? "yes" : "no") << " (tolerance 1e-6)\n";
  if (ctx.wants("gram")) {
    const auto g = basis.gram();
    const auto path = ctx.out_dir / "gram.csv";
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
    f << "# modes=" << basis.size() << " quantity=gram\n";
    f << "mode";
    for (const auto& idx : basis.indices()) f << ',' << '"' << idx.label() << '"';
    f << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      f << '"' << basis.indices()[i].label() << '"';
      for (std::size_t j = 0; j < basis.size(); ++j) f << ',' << g[i * basis.size() + j];
      f << '\n';
    }
    out << "wrote " << path.string() << '\n';
  }
  if (ctx.wants("modes")) {
    for (std::size_t m = 0; m < basis.size(); ++m) {
      const auto& idx = basis.indices()[m];
      std::string name = "mode-p" + std::to_string(idx.p) + "-l" + std::to_string(idx.l);
      if (idx.l > 0) name += idx.azimuth == Azimuth::Cosine ? "-cos" : "-sin";
      emit_field(ctx, name, basis.mode(m), out);
    }
  }
  return kExitOk;
}

int cmd_run(const Options& opt, std::ostream& out) {
  const auto ctx = load(opt, false);
  const auto& sc = ctx.sc;
  const auto object = make_object(sc);
  const auto d = run_detection(sc, object);
  const auto f = noise_figure_map(d.maps, sc.detector.eta());

  print_header(sc, out);
  out << "peak G=" << fixed6(max_of(d.maps.gain)) << '\n';
  out << "min F=" << fixed6(min_of(f)) << '\n';
  if (d.empirical_f.valid_count() > 0) {
    out << "min F_empirical=" << fixed6(d.empirical_f.min()) << '\n';
  }
  out << "peak mean count=" << fixed6(max_of(d.report.image_mean)) << '\n';
  print_validity(d.report.validity, out);
  if (!d.report.long_window) out << "warning: detection window shorter than 100/gamma\n";

  if (ctx.wants("gain-map")) emit_field(ctx, "gain-map", d.maps.gain, out);
  if (ctx.wants("noise-map")) emit_field(ctx, "noise-map", f, out);
  if (ctx.wants("image")) {
    const auto r = amplify(to_complex(object), sc.cavity, sc.train, 0.0, sc.validity_threshold);
    print_warnings(r.warnings, out);
    emit_image(ctx, r, "", out);
  }
  emit_report(ctx, d, out);
  if (ctx.wants("counts") || ctx.wants("mc-stats")) {
    const auto mc =
        monte_carlo_image(d.report.image_mean, d.report.image_variance, sc.seed, sc.shots);
    print_monte_carlo(sc, d, mc, out);
    print_warnings(mc.warnings, out);
    if (ctx.wants("counts")) emit_field(ctx, "counts", mc.last_sample, out);
    if (ctx.wants("mc-stats")) {
      emit_field(ctx, "mc-mean", mc.mean, out);
      emit_field(ctx, "mc-variance", mc.variance, out);
    }
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "Scenario file")->required();
  sub->add_option("--emit", opt.emit, "Artifacts to write (comma separated)")->delimiter(',');
  sub->add_option("--out-dir", opt.out_dir, "Output directory");
  sub->add_option("--seed", opt.seed, "Monte Carlo seed");
  sub->add_option("--shots", opt.shots, "Monte Carlo shots");
  sub->add_option("--geometry", opt.geometry, "planar | confocal | both")
      ->check(CLI::IsMember({"planar", "confocal", "both"}));
  sub->add_option("--threshold", opt.threshold, "Validity figure cutoff");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parametric image amplification in planar and confocal cavities"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const Options&, std::ostream&);
  };
  const Command commands[] = {
      {"run", "Evaluate a scenario and write the artifacts it requests", cmd_run},
      {"gain-map", "Gain G over the transverse grid", cmd_gain_map},
      {"noise-map", "Noise figure F over the transverse grid", cmd_noise_map},
      {"amplify", "Propagate the object to the image plane", cmd_amplify},
      {"simulate", "Monte Carlo photocount images", cmd_simulate},
      {"modes", "Gauss-Laguerre basis diagnostics", cmd_modes},
      {"validate", "Check a scenario and print the validity figure", cmd_validate},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, opt);
    if (std::string(c.name) == "modes") {
      sub->add_option("--pmax", opt.pmax, "Radial cutoff");
      sub->add_option("--lmax", opt.lmax, "Azimuthal cutoff");
      sub->add_option("--waist", opt.waist, "Basis waist (m), default rho0");
    }
    subs.emplace_back(sub, &c);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (const auto& [sub, cmd] : subs) {
      if (sub->parsed()) return cmd->fn(opt, out);
    }
  } catch (const Error& e) {
    err << "error [" << e.qualified_code() << "]: " << e.what() << '\n';
    return e.category() == ErrorCategory::Numeric ? kExitNumeric : kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [cli.Io]: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace paramp::cli
