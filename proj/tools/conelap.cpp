// conelap command line: builds wedge matrices, checks the discrete Wirtinger
// inequality, runs the cone isoperimetric suite, computes polytope
// surface-area forms, and emits sweep data for plotting.
//
// Exit codes: 0 ok, 1 inequality violated (check), 2 usage or invalid input,
// 3 numeric signature disagrees with the predicted one, 4 I/O failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conelap/cone.hpp"
#include "conelap/parse.hpp"
#include "conelap/polytope.hpp"
#include "conelap/report.hpp"
#include "conelap/wirtinger.hpp"

namespace {

using namespace conelap;
using cli::json;

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitIo = 4;

struct Output {
  std::string path = "-";

  int write(const std::string& text) const {
    if (path == "-") {
      std::cout << text << "\n";
      return kExitOk;
    }
    std::ofstream out(path);
    if (!out) {
      std::cerr << "error: cannot write '" << path << "'\n";
      return kExitIo;
    }
    out << text << "\n";
    return out ? kExitOk : kExitIo;
  }
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Mode parse_mode(const std::string& name) {
  if (name == "closed") return Mode::Closed;
  if (name == "dirichlet") return Mode::Dirichlet;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string matrix_csv(const WirtingerMatrix<double>& wm,
                       const Signature<double>& numeric,
                       const Signature<double>& predicted) {
  std::ostringstream out;
  out << "# conelap-matrix-v1\n";
  out << "# omega=" << format_double(wm.omega) << " signature=" << numeric.positive
      << "," << numeric.zero << "," << numeric.negative
      << " predicted=" << predicted.positive << "," << predicted.zero << ","
      << predicted.negative << "\n";
  for (Eigen::Index i = 0; i < wm.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < wm.matrix.cols(); ++j) {
      if (j) out << ",";
      out << format_double(wm.matrix(i, j));
    }
    out << "\n";
  }
  return out.str();
}

int run_matrix(const std::string& mode_name, const std::string& angles_text,
               const std::string& format, const Output& output) {
  const Mode mode = parse_mode(mode_name);
  const auto list = cli::parse_angle_list(angles_text);
  const AngleVector<double> angles = cli::make_angle_vector(list, mode);
  const WirtingerMatrix<double> wm = build(angles);
  const Signature<double> numeric = signature(wm.matrix);
  const Signature<double> predicted = predicted_signature(angles);
  const bool warn = near_resonance(angles);
  if (warn)
    std::cerr << "warning: total angle is within 1e-9 of resonance; the "
                 "numeric signature is ill-conditioned here\n";

  int rc = kExitOk;
  if (format == "csv") {
    rc = output.write(matrix_csv(wm, numeric, predicted));
  } else {
    rc = output.write(cli::matrix_report(wm, numeric, predicted, warn).dump(2));
  }
  if (rc != kExitOk) return rc;
  if (!numeric.counts_equal(predicted)) {
    std::cerr << "signature mismatch: numeric (" << numeric.positive << ","
              << numeric.zero << "," << numeric.negative << ") vs predicted ("
              << predicted.positive << "," << predicted.zero << ","
              << predicted.negative << ")\n";
    return kExitMismatch;
  }
  return kExitOk;
}

int run_wirtinger_check(const std::string& mode_name,
                        const std::string& angles_text, const std::string& x_text,
                        const Output& output) {
  const AngleVector<double> angles =
      cli::make_angle_vector(cli::parse_angle_list(angles_text), parse_mode(mode_name));
  const Eigen::VectorXd x = cli::parse_real_list(x_text);
  const auto verdict = check_wirtinger(angles, x);
  const int rc = output.write(cli::verdict_report(angles, x, verdict).dump(2));
  if (rc != kExitOk) return rc;
  return verdict.holds ? kExitOk : kExitViolated;
}

int run_wirtinger_violate(const std::string& angles_text, const Output& output) {
  const AngleVector<double> angles =
      cli::make_angle_vector(cli::parse_angle_list(angles_text), Mode::Closed);
  const auto x = find_violation(angles);
  return output.write(cli::violation_report(angles, x).dump(2));
}

int run_wirtinger_gap(const std::string& angles_text, const Output& output) {
  const AngleVector<double> angles =
      cli::make_angle_vector(cli::parse_angle_list(angles_text), Mode::Closed);
  const auto gap = spectral_gap(angles);
  return output.write(cli::gap_report(angles, gap).dump(2));
}

int run_cone_polygon(const std::string& angles_text,
                     const std::string& support_text, const Output& output) {
  const AngleVector<double> angles =
      cli::make_angle_vector(cli::parse_angle_list(angles_text), Mode::Closed);
  const auto wedges = make_wedges(angles);
  const Eigen::VectorXd h = cli::parse_real_list(support_text);
  const auto poly = build_polygon(wedges, h);
  return output.write(cli::polygon_report(poly, angles).dump(2));
}

int run_cone_isoper(const std::string& angles_text, int trials,
                    std::uint64_t seed, const Output& output) {
  const AngleVector<double> angles =
      cli::make_angle_vector(cli::parse_angle_list(angles_text), Mode::Closed);
  const auto wedges = make_wedges(angles);
  const auto wm = build_closed(angles);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(angles.size());
  const double len_unit = wm.weights.sum();

  double min_deficit = std::numeric_limits<double>::max();
  double sum_deficit = 0;
  int produced = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd f(angles.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = gauss(rng);
    // Perimeter-neutral direction, then a step small enough to stay convex.
    f -= (wm.weights.dot(f) / wm.weights.squaredNorm()) * wm.weights;
    if (f.norm() < 1e-12) continue;
    const Eigen::VectorXd mf = wm.matrix * f;
    double t = wm.weights.minCoeff() / (2.0 * mf.cwiseAbs().maxCoeff());
    Eigen::VectorXd h = ones + t * f;
    for (int halve = 0; halve < 100 && edge_lengths(wedges, h).minCoeff() <= 0;
         ++halve) {
      t /= 2;
      h = ones + t * f;
    }
    // Renormalize the perimeter exactly onto the circumscribed one.
    h *= len_unit / wm.weights.dot(h);
    const double deficit = isoperimetric_deficit(wedges, h);
    min_deficit = std::min(min_deficit, deficit);
    sum_deficit += deficit;
    ++produced;
  }
  json out{{"angles", cli::to_json(angles.angles())},
           {"omega", angles.total()},
           {"trials", produced},
           {"min_deficit", produced ? min_deficit : 0.0},
           {"mean_deficit", produced ? sum_deficit / produced : 0.0},
           {"circumscribed_area", len_unit / 2}};
  return output.write(out.dump(2));
}

int run_cone_improve(const std::string& angles_text, const Output& output) {
  const AngleVector<double> angles =
      cli::make_angle_vector(cli::parse_angle_list(angles_text), Mode::Closed);
  const auto wedges = make_wedges(angles);
  const auto h = improve_polygon(wedges);
  json out{{"angles", cli::to_json(angles.angles())},
           {"omega", angles.total()},
           {"improvement_exists", h.has_value()}};
  if (h) {
    const auto improved = build_polygon(wedges, *h);
    const auto circumscribed =
        build_polygon(wedges, Eigen::VectorXd::Ones(angles.size()).eval());
    out["support"] = cli::to_json(*h);
    out["area"] = improved.area;
    out["circumscribed_area"] = circumscribed.area;
    out["area_gain"] = improved.area - circumscribed.area;
    out["perimeter"] = improved.perimeter;
    out["circumscribed_perimeter"] = circumscribed.perimeter;
  }
  return output.write(out.dump(2));
}

int run_polytope(const std::string& subcmd, const std::string& normals_path,
                 std::uint64_t seed, int samples, const Output& output) {
  const Eigen::MatrixXd normals = cli::read_normals_file(normals_path);
  const auto fan = build_fan(normals);
  const auto form = quermass_matrix(fan);
  if (subcmd == "hessian") return output.write(cli::quermass_report(form).dump(2));
  const auto rep = verify_semidefinite(form, seed, samples);
  return output.write(cli::semidefinite_report(form, rep).dump(2));
}

void append_sweep_row(std::ostringstream& out, Eigen::Index n, double omega,
                      const Signature<double>& numeric,
                      const Signature<double>& predicted,
                      const Eigen::VectorXd& lambdas) {
  out << n << "," << format_double(omega) << "," << numeric.positive << ","
      << numeric.zero << "," << numeric.negative << "," << predicted.positive
      << "," << predicted.zero << "," << predicted.negative << ","
      << (numeric.counts_equal(predicted) ? 1 : 0);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    out << "," << format_double(lambdas[i]);
  out << "\n";
}

int run_sweep(const std::string& family, const std::string& mode_name,
              const std::string& n_range, const std::string& omega_range,
              int omega_steps, int trials, std::uint64_t seed,
              const Output& output) {
  const Mode mode = parse_mode(mode_name);
  const auto colon = n_range.find(':');
  const long n_lo = std::stol(n_range.substr(0, colon));
  const long n_hi = colon == std::string::npos ? n_lo
                                               : std::stol(n_range.substr(colon + 1));
  const auto ocolon = omega_range.find(':');
  const double omega_lo =
      cli::parse_angle_list(omega_range.substr(0, ocolon)).total;
  const double omega_hi =
      ocolon == std::string::npos
          ? omega_lo
          : cli::parse_angle_list(omega_range.substr(ocolon + 1)).total;
  if (n_lo < 1 || n_hi < n_lo || omega_lo <= 0 || omega_hi < omega_lo ||
      omega_steps < 1 || trials < 1)
    throw std::invalid_argument("malformed sweep ranges");

  std::ostringstream out;
  out << "# conelap-sweep-v1\n";
  out << "n,omega,p,q,r,pred_p,pred_q,pred_r,match,lambda...\n";

  const auto omega_at = [&](int step) {
    if (omega_steps == 1) return omega_lo;
    return omega_lo + (omega_hi - omega_lo) * step / (omega_steps - 1);
  };

  if (family == "equal-angle") {
    for (long n = n_lo; n <= n_hi; ++n) {
      for (int step = 0; step < omega_steps; ++step) {
        const double omega = omega_at(step);
        const Eigen::Index count = mode == Mode::Closed ? n : n + 1;
        const double common = omega / static_cast<double>(count);
        if (!(common > 1e-9 && common < std::numbers::pi - 1e-9)) continue;
        const AngleVector<double> angles(
            Eigen::VectorXd::Constant(count, common), mode, omega);
        const auto wm = build(angles);
        const auto numeric = signature(wm.matrix);
        const auto predicted = predicted_signature(angles);
        const auto closed_form = equal_angle_spectrum(n, omega, mode);
        append_sweep_row(out, n, omega, numeric, predicted, closed_form.values);
      }
    }
  } else if (family == "random") {
    std::uniform_int_distribution<long> pick_n(n_lo, n_hi);
    std::uniform_real_distribution<double> pick_omega(omega_lo, omega_hi);
    for (int trial = 0; trial < trials; ++trial) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial));
      const long n = pick_n(rng);
      const Eigen::Index count = mode == Mode::Closed ? n : n + 1;
      if (count < (mode == Mode::Closed ? 3 : 2)) continue;
      const double omega = pick_omega(rng);
      if (omega >= 0.98 * std::numbers::pi * static_cast<double>(count)) continue;
      std::uniform_real_distribution<double> pick_angle(0.02, std::numbers::pi - 0.02);
      Eigen::VectorXd raw(count);
      bool ok = false;
      for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
        for (Eigen::Index i = 0; i < count; ++i) raw[i] = pick_angle(rng);
        raw *= omega / raw.sum();
        ok = (raw.array() > 1e-6).all() &&
             (raw.array() < std::numbers::pi - 1e-6).all();
      }
      if (!ok) continue;
      const AngleVector<double> angles(raw, mode);
      const auto wm = build(angles);
      const auto decomp = eigh(wm.matrix);
      append_sweep_row(out, angles.size(), angles.total(),
                       signature(decomp), predicted_signature(angles),
                       decomp.eigenvalues);
    }
  } else {
    throw std::invalid_argument("unknown sweep family '" + family + "'");
  }
  return output.write(out.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete Wirtinger matrices, cone isoperimetry, and polytope "
               "surface-area forms"};
  app.require_subcommand(1);

  std::string mode = "closed";
  std::string angles_text;
  std::string x_text;
  std::string support_text;
  std::string format = "json";
  std::string normals_path;
  std::string family = "equal-angle";
  std::string n_range = "3:8";
  std::string omega_range = "pi:3pi";
  int omega_steps = 9;
  int trials = 200;
  int samples = 1000;
  std::uint64_t seed = 1;
  Output output;

  auto* cmd_matrix = app.add_subcommand("matrix", "build a wedge matrix");
  cmd_matrix->add_option("--mode", mode, "closed or dirichlet");
  cmd_matrix->add_option("--angles", angles_text, "angle list")->required();
  cmd_matrix->add_option("--format", format, "json or csv");
  cmd_matrix->add_option("--out", output.path, "output path, - for stdout");

  auto* cmd_wirt = app.add_subcommand("wirtinger", "inequality checks");
  auto* wirt_check = cmd_wirt->add_subcommand("check", "evaluate both sides");
  wirt_check->add_option("--mode", mode);
  wirt_check->add_option("--angles", angles_text)->required();
  wirt_check->add_option("--x", x_text)->required();
  wirt_check->add_option("--out", output.path);
  auto* wirt_violate =
      cmd_wirt->add_subcommand("violate", "search a violating vector");
  wirt_violate->add_option("--angles", angles_text)->required();
  wirt_violate->add_option("--out", output.path);
  auto* wirt_gap = cmd_wirt->add_subcommand("gap", "weighted spectral gap");
  wirt_gap->add_option("--angles", angles_text)->required();
  wirt_gap->add_option("--out", output.path);
  cmd_wirt->require_subcommand(1);

  auto* cmd_cone = app.add_subcommand("cone", "polygons on a cone");
  auto* cone_polygon = cmd_cone->add_subcommand("polygon", "build from support numbers");
  cone_polygon->add_option("--angles", angles_text)->required();
  cone_polygon->add_option("--support", support_text)->required();
  cone_polygon->add_option("--out", output.path);
  auto* cone_isoper =
      cmd_cone->add_subcommand("isoper", "random-perturbation deficit suite");
  cone_isoper->add_option("--angles", angles_text)->required();
  cone_isoper->add_option("--trials", trials);
  cone_isoper->add_option("--seed", seed);
  cone_isoper->add_option("--out", output.path);
  auto* cone_improve =
      cmd_cone->add_subcommand("improve", "beat the circumscribed polygon");
  cone_improve->add_option("--angles", angles_text)->required();
  cone_improve->add_option("--out", output.path);
  cmd_cone->require_subcommand(1);

  auto* cmd_poly = app.add_subcommand("polytope", "surface-area form in R^3");
  auto* poly_hessian = cmd_poly->add_subcommand("hessian", "quadratic form matrix");
  poly_hessian->add_option("--normals", normals_path, "JSON normals file")->required();
  poly_hessian->add_option("--out", output.path);
  auto* poly_verify =
      cmd_poly->add_subcommand("verify", "hyperplane semidefiniteness report");
  poly_verify->add_option("--normals", normals_path, "JSON normals file")->required();
  poly_verify->add_option("--seed", seed);
  poly_verify->add_option("--samples", samples);
  poly_verify->add_option("--out", output.path);
  cmd_poly->require_subcommand(1);

  auto* cmd_sweep = app.add_subcommand("sweep", "CSV spectra and signatures");
  cmd_sweep->add_option("--family", family, "equal-angle or random");
  cmd_sweep->add_option("--mode", mode);
  cmd_sweep->add_option("--n", n_range, "n or lo:hi");
  cmd_sweep->add_option("--omega", omega_range, "angle token or lo:hi");
  cmd_sweep->add_option("--omega-steps", omega_steps);
  cmd_sweep->add_option("--trials", trials);
  cmd_sweep->add_option("--seed", seed);
  cmd_sweep->add_option("--out", output.path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_matrix->parsed())
      return run_matrix(mode, angles_text, format, output);
    if (wirt_check->parsed())
      return run_wirtinger_check(mode, angles_text, x_text, output);
    if (wirt_violate->parsed()) return run_wirtinger_violate(angles_text, output);
    if (wirt_gap->parsed()) return run_wirtinger_gap(angles_text, output);
    if (cone_polygon->parsed())
      return run_cone_polygon(angles_text, support_text, output);
    if (cone_isoper->parsed())
      return run_cone_isoper(angles_text, trials, seed, output);
    if (cone_improve->parsed()) return run_cone_improve(angles_text, output);
    if (poly_hessian->parsed())
      return run_polytope("hessian", normals_path, seed, samples, output);
    if (poly_verify->parsed())
      return run_polytope("verify", normals_path, seed, samples, output);
    if (cmd_sweep->parsed())
      return run_sweep(family, mode, n_range, omega_range, omega_steps, trials,
                       seed, output);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cerr << "error: no subcommand\n";
  return kExitUsage;
}
