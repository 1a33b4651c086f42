// Command-line front end: every subcommand reads JSON inputs, runs one
// library entry point, and prints a single-line JSON report to stdout (or
// --out). Reports are byte-identical across runs on identical inputs.
//
// Exit codes: 0 success, 1 unknown or missing subcommand, 2 invalid input
// (malformed JSON, bad flags, rejected values), 3 numerical degeneracy.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pickgrass/ball.hpp"
#include "pickgrass/blaschke.hpp"
#include "pickgrass/coinvariant.hpp"
#include "pickgrass/drury_arveson.hpp"
#include "pickgrass/json_io.hpp"
#include "pickgrass/pick.hpp"
#include "pickgrass/quotient.hpp"
#include "pickgrass/rng.hpp"
#include "pickgrass/spectra.hpp"
#include "pickgrass/types.hpp"

namespace {

using namespace pickgrass;

constexpr const char* kVersion = "pickgrass 1.0.0";

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "dist",  "pick-check", "spectrum", "perturb",  "blaschke",  "psi",
      "phi",   "roundtrip",  "strat",    "embdim",   "regular",   "compress",
      "fiber", "gleason",    "curvature", "irreducible"};
  return names;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string row_json(const Eigen::RowVectorXcd& r) {
  std::string s = "[";
  for (int i = 0; i < r.size(); ++i) {
    if (i) s += ",";
    s += complex_json(r(i));
  }
  return s + "]";
}

std::vector<BallPoint> support_points(const Divisor& X) {
  std::vector<BallPoint> pts;
  for (const auto& [p, mult] : X.points()) {
    (void)mult;
    pts.push_back(p);
  }
  return pts;
}

Vec parse_value_list(const std::vector<std::string>& raw) {
  Vec t(static_cast<int>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i)
    t(static_cast<int>(i)) = parse_complex_pair(raw[i]);
  return t;
}

std::string quoted_list(std::initializer_list<const char*> items) {
  std::string s = "[";
  bool first = true;
  for (const char* item : items) {
    if (!first) s += ",";
    first = false;
    s += std::string("\"") + item + "\"";
  }
  return s + "]";
}

std::string schema_entry(const char* name, std::initializer_list<const char*> flags,
                         std::initializer_list<const char*> report) {
  return std::string("{\"name\":\"") + name + "\",\"flags\":" + quoted_list(flags) +
         ",\"report\":" + quoted_list(report) + "}";
}

std::string schema_json() {
  std::string s = "{\"name\":\"pickgrass\",\"version\":\"1.0.0\",\"subcommands\":[";
  s += schema_entry("dist", {"--x", "--y", "--out"}, {"d_s", "d_o"});
  s += "," + schema_entry("pick-check", {"--problem", "--tol", "--out"},
                          {"min_eigenvalue", "feasible", "marginal"});
  s += "," + schema_entry("spectrum", {"--tuple", "--seed", "--out"},
                          {"divisor", "degenerate", "outside_ball", "retries"});
  s += "," + schema_entry("perturb", {"--a", "--b", "--tol", "--seed", "--out"},
                          {"hausdorff", "matching", "elsner_bound", "holds"});
  s += "," + schema_entry("blaschke", {"--x", "--probes", "--out"},
                          {"kind", "degree", "width", "rows"});
  s += "," + schema_entry("psi", {"--model", "--seed", "--out"},
                          {"divisor", "gram_warning", "gram_condition", "degenerate",
                           "outside_ball", "retries"});
  s += "," + schema_entry("phi", {"--x", "--out"}, {"kind", "width", "model"});
  s += "," + schema_entry("roundtrip", {"--x", "--seed", "--out"},
                          {"d_o_error", "kernel_identity_error"});
  s += "," + schema_entry("strat", {"--x", "--out"}, {"stratum"});
  s += "," + schema_entry("embdim", {"--x", "--out"}, {"embedding_dimension"});
  s += "," + schema_entry("regular", {"--x", "--out"}, {"regular"});
  s += "," + schema_entry("compress", {"--poly", "--N", "--out"},
                          {"dim", "graded_dims", "defect_error"});
  s += "," + schema_entry("fiber", {"--poly", "--N", "--base", "--t", "--out"},
                          {"dimension", "points", "discrepancy", "root_ratio_max",
                           "cone_bound", "within_cone_bound"});
  s += "," + schema_entry("gleason", {"--poly", "--N", "--base", "--t", "--f",
                                      "--tol", "--out"},
                          {"residual", "in_range"});
  s += "," + schema_entry("curvature", {"--lambda", "--mu", "--step", "--N",
                                        "--richardson", "--out"},
                          {"curvature_at_0", "formula_value", "abs_err"});
  s += "," + schema_entry("irreducible", {"--lambda", "--mu", "--samples", "--seed",
                                          "--out"},
                          {"commutant_dimension", "irreducible", "conclusive",
                           "degenerate_samples", "second_derivative_diagonal"});
  return s + "]}";
}

void print_usage(std::ostream& os) {
  os << "usage: pickgrass <subcommand> [flags]\n"
     << "       pickgrass --version | --schema | --help\n\n"
     << "subcommands:\n"
     << "  dist        --x X.json --y Y.json        matching distances between divisors\n"
     << "  pick-check  --problem P.json [--tol]     interpolation feasibility matrix\n"
     << "  spectrum    --tuple A.json [--seed]      joint spectrum with multiplicities\n"
     << "  perturb     --a A.json --b B.json        spectral continuity bound check\n"
     << "  blaschke    --x X.json --probes P.json   evaluate the vanishing inner function\n"
     << "  psi         --model M.json [--seed]      spectrum of a kernel-span model\n"
     << "  phi         --x X.json                   inner function + complement model\n"
     << "  roundtrip   --x X.json [--seed]          psi(phi(X)) vs X + kernel identity\n"
     << "  strat       --x X.json                   affine-rank stratum of the support\n"
     << "  embdim      --x X.json                   smallest ball dimension embedding it\n"
     << "  regular     --x X.json                   pairwise-distance regularity\n"
     << "  compress    --poly p.json --N 20         truncated quotient model summary\n"
     << "  fiber       --poly p.json --N 40 --base 1 --t re,im   adjoint-shift fiber\n"
     << "  gleason     --poly ... --f f.json        split f into range + fiber parts\n"
     << "  curvature   --lambda re,im --mu re,im    metric curvature of the example family\n"
     << "  irreducible --lambda re,im --mu re,im    commutant test of the kernel family\n\n"
     << "All reports are single-line JSON on stdout; --out FILE writes the report\n"
     << "to a file instead. Exit codes: 0 ok, 1 unknown subcommand, 2 invalid\n"
     << "input, 3 numerical degeneracy.\n";
}

struct Report {
  std::string body;
  int exit_code = 0;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(std::cerr);
    return 1;
  }
  const std::string first = argv[1];
  if (first == "--version") {
    std::cout << kVersion << "\n";
    return 0;
  }
  if (first == "--schema") {
    std::cout << schema_json() << "\n";
    return 0;
  }
  if (first == "--help" || first == "-h") {
    print_usage(std::cout);
    return 0;
  }
  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), first) == names.end()) {
    std::cerr << "unknown subcommand: " << first << "\n";
    print_usage(std::cerr);
    return 1;
  }

  CLI::App app{"divisors, spectra and quotient models on the unit ball"};
  app.require_subcommand(1);

  std::string out_path;
  std::string x_path, y_path, problem_path, tuple_path, a_path, b_path;
  std::string probes_path, model_path, poly_path, f_path;
  std::string lambda_str, mu_str;
  std::vector<std::string> t_raw;
  std::vector<int> base;
  double tol_pick = 1e-10, tol_perturb = 1e-10, tol_gleason = 1e-8;
  double step = 1e-3;
  int trunc_N = 0, curv_N = 60, n_samples = 25;
  bool richardson = false;
  std::uint64_t seed = kDefaultSeed;

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write the report to this file");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed for scalarizing directions");
  };

  CLI::App* dist = app.add_subcommand("dist", "distances between two divisors");
  dist->add_option("--x", x_path, "divisor JSON file")->required();
  dist->add_option("--y", y_path, "divisor JSON file")->required();
  add_out(dist);

  CLI::App* pick = app.add_subcommand("pick-check", "interpolation feasibility");
  pick->add_option("--problem", problem_path, "problem JSON file")->required();
  pick->add_option("--tol", tol_pick, "feasibility tolerance (default 1e-10)");
  add_out(pick);

  CLI::App* spectrum = app.add_subcommand("spectrum", "joint spectrum of a tuple");
  spectrum->add_option("--tuple", tuple_path, "tuple JSON file")->required();
  add_seed(spectrum);
  add_out(spectrum);

  CLI::App* perturb = app.add_subcommand("perturb", "spectral continuity bound");
  perturb->add_option("--a", a_path, "tuple JSON file")->required();
  perturb->add_option("--b", b_path, "tuple JSON file")->required();
  perturb->add_option("--tol", tol_perturb, "bound slack (default 1e-10)");
  add_seed(perturb);
  add_out(perturb);

  CLI::App* blaschke = app.add_subcommand("blaschke", "evaluate the inner function");
  blaschke->add_option("--x", x_path, "divisor JSON file")->required();
  blaschke->add_option("--probes", probes_path, "divisor JSON file of probe points")
      ->required();
  add_out(blaschke);

  CLI::App* psi_cmd = app.add_subcommand("psi", "spectrum of a model");
  psi_cmd->add_option("--model", model_path, "model JSON file")->required();
  add_seed(psi_cmd);
  add_out(psi_cmd);

  CLI::App* phi_cmd = app.add_subcommand("phi", "inner function and model of a divisor");
  phi_cmd->add_option("--x", x_path, "divisor JSON file")->required();
  add_out(phi_cmd);

  CLI::App* roundtrip = app.add_subcommand("roundtrip", "psi after phi against the input");
  roundtrip->add_option("--x", x_path, "divisor JSON file")->required();
  add_seed(roundtrip);
  add_out(roundtrip);

  CLI::App* strat = app.add_subcommand("strat", "affine-rank stratum");
  strat->add_option("--x", x_path, "divisor JSON file")->required();
  add_out(strat);

  CLI::App* embdim = app.add_subcommand("embdim", "smallest embedding dimension");
  embdim->add_option("--x", x_path, "divisor JSON file")->required();
  add_out(embdim);

  CLI::App* regular = app.add_subcommand("regular", "pairwise-distance regularity");
  regular->add_option("--x", x_path, "divisor JSON file")->required();
  add_out(regular);

  CLI::App* compress_cmd = app.add_subcommand("compress", "truncated quotient model");
  compress_cmd->add_option("--poly", poly_path, "homogeneous polynomial JSON file")
      ->required();
  compress_cmd->add_option("--N", trunc_N, "truncation degree")->required();
  add_out(compress_cmd);

  CLI::App* fiber_cmd = app.add_subcommand("fiber", "adjoint-shift fiber over a base value");
  fiber_cmd->add_option("--poly", poly_path, "homogeneous polynomial JSON file")
      ->required();
  fiber_cmd->add_option("--N", trunc_N, "truncation degree")->required();
  fiber_cmd->add_option("--base", base, "base coordinates (0-based)");
  fiber_cmd->add_option("--t", t_raw, "base values, one re,im per coordinate");
  add_out(fiber_cmd);

  CLI::App* gleason_cmd = app.add_subcommand("gleason", "range membership at a base value");
  gleason_cmd->add_option("--poly", poly_path, "homogeneous polynomial JSON file")
      ->required();
  gleason_cmd->add_option("--N", trunc_N, "truncation degree")->required();
  gleason_cmd->add_option("--base", base, "base coordinates (0-based)");
  gleason_cmd->add_option("--t", t_raw, "base values, one re,im per coordinate");
  gleason_cmd->add_option("--f", f_path, "vector JSON file")->required();
  gleason_cmd->add_option("--tol", tol_gleason, "membership tolerance (default 1e-8)");
  add_out(gleason_cmd);

  CLI::App* curvature = app.add_subcommand("curvature", "curvature of the example metric");
  curvature->add_option("--lambda", lambda_str, "first parameter, re,im")->required();
  curvature->add_option("--mu", mu_str, "second parameter, re,im")->required();
  curvature->add_option("--step", step, "finite-difference step (default 1e-3)");
  curvature->add_option("--N", curv_N, "truncation degree of the Gram pathway");
  curvature->add_flag("--richardson", richardson, "extrapolate the stencil");
  add_out(curvature);

  CLI::App* irreducible = app.add_subcommand("irreducible", "commutant of the kernel family");
  irreducible->add_option("--lambda", lambda_str, "first parameter, re,im")->required();
  irreducible->add_option("--mu", mu_str, "second parameter, re,im")->required();
  irreducible->add_option("--samples", n_samples, "number of sample pairs (default 25)");
  add_seed(irreducible);
  add_out(irreducible);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  Report report;
  try {
    if (dist->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      Divisor Y = parse_divisor(read_file(y_path));
      report.body = JsonObject()
                        .real("d_s", symmetric_distance(X, Y))
                        .real("d_o", optimal_matching_distance(X, Y))
                        .str();
    } else if (pick->parsed()) {
      PickProblem prob = parse_pick_problem(read_file(problem_path));
      PickMatrixResult r = pick_matrix(prob);
      report.body = JsonObject()
                        .real("min_eigenvalue", r.min_eigenvalue)
                        .boolean("feasible", r.min_eigenvalue >= -tol_pick)
                        .boolean("marginal", std::abs(r.min_eigenvalue) <= tol_pick)
                        .str();
    } else if (spectrum->parsed()) {
      CommutingTuple A = parse_tuple(read_file(tuple_path));
      JointSpectrumResult r = joint_spectrum(A, seed);
      report.body = JsonObject()
                        .field("divisor", divisor_json(r.divisor))
                        .boolean("degenerate", r.degenerate)
                        .boolean("outside_ball", r.outside_ball)
                        .integer("retries", r.retries)
                        .str();
      if (r.degenerate) report.exit_code = 3;
    } else if (perturb->parsed()) {
      CommutingTuple A = parse_tuple(read_file(a_path));
      CommutingTuple B = parse_tuple(read_file(b_path));
      PerturbationCheck c = spectral_perturbation_check(A, B, seed);
      report.body = JsonObject()
                        .real("hausdorff", c.hausdorff)
                        .real("matching", c.matching)
                        .real("elsner_bound", c.bound)
                        .boolean("holds", c.hausdorff <= c.bound + tol_perturb)
                        .str();
    } else if (blaschke->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      Divisor probes = parse_divisor(read_file(probes_path));
      if (probes.dim() != X.dim())
        throw validation_error("probe dimension differs from the divisor");
      PhiResult f = phi(X);
      std::string rows = "[";
      bool first_row = true;
      for (const auto& [p, mult] : probes.points()) {
        (void)mult;
        if (!first_row) rows += ",";
        first_row = false;
        if (f.chain)
          rows += row_json(evaluate_blaschke(*f.chain, p.coords()));
        else
          rows += "[" + complex_json(evaluate_classical(*f.product, p.coords()(0))) + "]";
      }
      rows += "]";
      report.body = JsonObject()
                        .text("kind", f.chain ? "chain" : "product")
                        .integer("degree", X.degree())
                        .integer("width", f.chain ? f.chain->width() : 1)
                        .field("rows", rows)
                        .str();
    } else if (psi_cmd->parsed()) {
      CoinvariantModel m = parse_model(read_file(model_path));
      ValidationReport v = validate_coinvariant_model(m);
      if (!v.valid) throw validation_error("invalid model: " + v.witness);
      PsiResult r = psi(m, seed);
      report.body = JsonObject()
                        .field("divisor", divisor_json(r.spectrum.divisor))
                        .boolean("gram_warning", r.gram_warning)
                        .real("gram_condition", r.gram_condition)
                        .boolean("degenerate", r.spectrum.degenerate)
                        .boolean("outside_ball", r.spectrum.outside_ball)
                        .integer("retries", r.spectrum.retries)
                        .str();
      if (r.spectrum.degenerate) report.exit_code = 3;
    } else if (phi_cmd->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      PhiResult f = phi(X);
      report.body = JsonObject()
                        .text("kind", f.chain ? "chain" : "product")
                        .integer("width", f.chain ? f.chain->width() : 1)
                        .field("model", model_json(f.model))
                        .str();
    } else if (roundtrip->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      PhiResult f = phi(X);
      PsiResult back = psi(f.model, seed);
      Rng rng(seed);
      std::vector<std::pair<Vec, Vec>> samples;
      for (int i = 0; i < 50; ++i)
        samples.emplace_back(rng.ball_point(X.dim(), 0.6),
                             rng.ball_point(X.dim(), 0.6));
      report.body =
          JsonObject()
              .real("d_o_error", optimal_matching_distance(back.spectrum.divisor, X))
              .real("kernel_identity_error", kernel_identity_error(f, samples))
              .str();
      if (back.spectrum.degenerate) report.exit_code = 3;
    } else if (strat->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      report.body = JsonObject().integer("stratum", stratum(X)).str();
    } else if (embdim->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      report.body = JsonObject()
                        .integer("embedding_dimension",
                                 embedding_dimension(support_points(X)))
                        .str();
    } else if (regular->parsed()) {
      Divisor X = parse_divisor(read_file(x_path));
      report.body = JsonObject().boolean("regular", is_regular(X)).str();
    } else if (compress_cmd->parsed()) {
      HomogPoly p = parse_homog_poly(read_file(poly_path));
      QuotientModel q = compress(p, trunc_N);
      Mat D = Mat::Identity(q.dim(), q.dim());
      for (const Mat& S : q.shifts) D -= S * S.adjoint();
      const int band = q.degree_offset(q.N);
      Mat expected = Mat::Zero(band, band);
      expected(0, 0) = 1.0;
      report.body = JsonObject()
                        .integer("dim", q.dim())
                        .field("graded_dims", int_array_json(q.graded_dims))
                        .real("defect_error",
                              (D.topLeftCorner(band, band) - expected).norm())
                        .str();
    } else if (fiber_cmd->parsed()) {
      HomogPoly p = parse_homog_poly(read_file(poly_path));
      QuotientModel q = compress(p, trunc_N);
      FiberResult r = fiber(q, base, parse_value_list(t_raw));
      std::string pts = "[";
      bool first_pt = true;
      for (const auto& [x, mult] : r.points) {
        if (!first_pt) pts += ",";
        first_pt = false;
        pts += "{\"coords\":" + point_json(x) + ",\"mult\":" + std::to_string(mult) + "}";
      }
      pts += "]";
      report.body = JsonObject()
                        .integer("dimension", r.dimension)
                        .field("points", pts)
                        .real("discrepancy", r.discrepancy)
                        .real("root_ratio_max", r.root_ratio_max)
                        .real("cone_bound", r.cone_bound)
                        .boolean("within_cone_bound", r.within_cone_bound)
                        .str();
    } else if (gleason_cmd->parsed()) {
      HomogPoly p = parse_homog_poly(read_file(poly_path));
      QuotientModel q = compress(p, trunc_N);
      TruncVec raw = parse_truncvec(read_file(f_path));
      if (raw.dim() != p.dim())
        throw validation_error("vector dimension differs from the polynomial");
      TruncVec fv(p.dim(), q.N);
      for (const auto& [a, c] : raw.coeffs()) fv.set_coeff(a, c);
      GleasonResult g =
          gleason_decompose(q, base, parse_value_list(t_raw), model_coords(q, fv));
      report.body = JsonObject()
                        .real("residual", g.residual)
                        .boolean("in_range", g.residual <= tol_gleason)
                        .str();
    } else if (curvature->parsed()) {
      cplx lambda = parse_complex_pair(lambda_str);
      cplx mu = parse_complex_pair(mu_str);
      MetricCurvatureResult r = metric_curvature(lambda, mu, step, curv_N, richardson);
      const double formula = 3.0 + std::norm(lambda + mu);
      report.body = JsonObject()
                        .real("curvature_at_0", r.curvature_at_0)
                        .real("formula_value", formula)
                        .real("abs_err", std::abs(r.curvature_at_0 - formula))
                        .str();
    } else if (irreducible->parsed()) {
      cplx lambda = parse_complex_pair(lambda_str);
      cplx mu = parse_complex_pair(mu_str);
      Rng rng(seed);
      std::vector<std::pair<cplx, cplx>> samples;
      for (int i = 0; i < n_samples; ++i) {
        cplx z = rng.ball_point(1, 0.25)(0);
        cplx w = rng.ball_point(1, 0.25)(0);
        samples.emplace_back(z, w);
      }
      IrreducibilityResult r = irreducibility_check(lambda, mu, samples);
      report.body =
          JsonObject()
              .integer("commutant_dimension", r.commutant_dimension)
              .boolean("irreducible", r.irreducible)
              .boolean("conclusive", r.conclusive)
              .boolean("degenerate_samples", r.degenerate_samples)
              .field("second_derivative_diagonal",
                     real_array_json({r.second_derivative_diagonal(0),
                                      r.second_derivative_diagonal(1)}))
              .str();
    }
  } catch (const validation_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const degeneracy_error& e) {
    std::cerr << "numerical degeneracy: " << e.what() << "\n";
    return 3;
  }

  if (out_path.empty()) {
    std::cout << report.body << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write file: " << out_path << "\n";
      return 2;
    }
    out << report.body << "\n";
  }
  return report.exit_code;
}
