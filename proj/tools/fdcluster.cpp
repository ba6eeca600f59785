// fdcluster: cluster functional data (curves on a shared grid) with
// mean-field variational Bayes. Subcommands: simulate, fit, replicate,
// dic-scan. See README.md for the file formats.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "funcvb/basis.hpp"
#include "funcvb/csv_io.hpp"
#include "funcvb/errors.hpp"
#include "funcvb/harness.hpp"
#include "funcvb/kmeans.hpp"
#include "funcvb/metrics.hpp"
#include "funcvb/model1.hpp"
#include "funcvb/model2.hpp"
#include "funcvb/model_select.hpp"
#include "funcvb/priors.hpp"
#include "funcvb/rng.hpp"
#include "funcvb/scenarios.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace funcvb;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonOptions {
  std::string model = "m1";
  int k = 3;
  int basis_count = 6;
  int order = 4;
  double threshold = 0.01;
  int max_iter = 100;
  std::uint64_t seed = 0;
  int restarts = 1;
  std::string special_fn = "exact";
  std::string prior_preset;
  int workers = 1;
  std::string out;
};

void add_common_flags(CLI::App* cmd, CommonOptions* opt, bool with_model = true) {
  if (with_model) cmd->add_option("--model", opt->model, "m1 (independent errors) or m2 (random intercept)")
      ->check(CLI::IsMember({"m1", "m2"}));
  cmd->add_option("--k", opt->k, "number of clusters");
  cmd->add_option("--basis", opt->basis_count, "number of B-spline basis functions");
  cmd->add_option("--order", opt->order, "spline order (default 4, cubic)");
  cmd->add_option("--threshold", opt->threshold, "ELBO convergence threshold");
  cmd->add_option("--max-iter", opt->max_iter, "maximum CAVI iterations");
  cmd->add_option("--seed", opt->seed, "base RNG seed");
  cmd->add_option("--restarts", opt->restarts, "independent initializations, max-ELBO fit kept");
  cmd->add_option("--special-fn", opt->special_fn, "ELBO special functions: exact or paper_approx")
      ->check(CLI::IsMember({"exact", "paper_approx"}));
  cmd->add_option("--prior-preset", opt->prior_preset,
                  "setting1..setting4 (needs known true coefficients)");
  cmd->add_option("--workers", opt->workers, "worker threads for replicates/restarts");
  cmd->add_option("--out", opt->out, "output file or directory");
}

SpecialFn parse_special(const std::string& name) {
  return name == "paper_approx" ? SpecialFn::kPaperApprox : SpecialFn::kExact;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

// ---------------------------------------------------------------- simulate

int run_simulate(int scenario_id, int replicates, const CommonOptions& opt) {
  const ScenarioSpec spec = make_scenario(scenario_id);
  const fs::path dir = opt.out.empty() ? fs::path("simulated") : fs::path(opt.out);
  fs::create_directories(dir);

  json manifest;
  manifest["scenario"] = scenario_id;
  manifest["k"] = spec.k;
  manifest["curves_per_cluster"] = spec.curves_per_cluster;
  manifest["n_points"] = spec.n_points;
  manifest["domain"] = {spec.domain_lo, spec.domain_hi};
  manifest["noise_sd"] = spec.noise_sd;
  manifest["fit_basis_count"] = spec.fit_basis_count;
  manifest["base_seed"] = opt.seed;
  manifest["replicates"] = json::array();

  for (int rep = 0; rep < replicates; ++rep) {
    const std::uint64_t rep_seed = stream_seed(opt.seed, 0x67656e64ULL, rep);
    const SimulatedDataset sim = generate(spec, rep_seed);
    const std::string stem = "scenario" + std::to_string(scenario_id) + "_rep" +
                             std::to_string(rep + 1);
    write_dataset_csv((dir / (stem + ".csv")).string(), sim.data);
    write_labels_csv((dir / (stem + "_labels.csv")).string(), sim.data.true_labels);
    if (rep == 0) {
      write_curves_csv((dir / ("scenario" + std::to_string(scenario_id) + "_true_means.csv"))
                           .string(),
                       sim.data.grid, sim.true_means);
    }
    manifest["replicates"].push_back({{"file", stem + ".csv"},
                                      {"labels", stem + "_labels.csv"},
                                      {"seed", rep_seed}});
  }
  write_json((dir / "manifest.json").string(), manifest);
  std::cout << "wrote " << replicates << " dataset(s) to " << dir.string() << "\n";
  return 0;
}

// --------------------------------------------------------------------- fit

PriorConfig build_fit_priors(const FunctionalDataset& data, const BasisMatrix& basis,
                             const CommonOptions& opt, const std::string& truth_means_path,
                             double prior_s0, double prior_a0, double prior_r0,
                             double prior_alpha0, double prior_beta0) {
  const int m = basis.count();
  PriorConfig priors = PriorConfig::flat(opt.k, m, 1.0 / prior_s0);

  const Eigen::LLT<Eigen::MatrixXd> llt(basis.values.transpose() * basis.values);
  if (!opt.prior_preset.empty()) {
    if (truth_means_path.empty()) {
      throw DomainError("--prior-preset needs --truth-means with the true cluster curves");
    }
    const CurvesOnGrid means = read_curves_csv(truth_means_path);
    if (means.curves_by_row.rows() != opt.k)
      throw ShapeError("--truth-means must have one curve per cluster");
    if (means.grid.size() != data.grid.size())
      throw ShapeError("--truth-means grid does not match the dataset grid");
    std::vector<Eigen::VectorXd> truth(opt.k);
    for (int c = 0; c < opt.k; ++c) {
      truth[c] = llt.solve(basis.values.transpose() * means.curves_by_row.row(c).transpose());
    }
    priors = prior_preset(prior_setting_from_name(opt.prior_preset), truth,
                          stream_seed(opt.seed, 0x707265ULL));
  } else {
    // no prior knowledge: B-spline regression on one seed-chosen curve
    Rng pick(stream_seed(opt.seed, 0x797072ULL));
    const int i = static_cast<int>(pick.below(data.n_curves()));
    const Eigen::VectorXd base =
        llt.solve(basis.values.transpose() * data.y.row(i).transpose());
    priors.coef_mean.assign(opt.k, base);
  }
  priors.shape_tau = prior_a0;
  priors.rate_tau = prior_r0;
  priors.shape_tau_a = prior_alpha0;
  priors.rate_tau_a = prior_beta0;
  return priors;
}

int run_fit(const std::string& data_path, const std::string& labels_path,
            const std::string& truth_means_path, const CommonOptions& opt, double prior_s0,
            double prior_a0, double prior_r0, double prior_alpha0, double prior_beta0) {
  const auto t0 = std::chrono::steady_clock::now();
  FunctionalDataset data = read_dataset_csv(data_path);
  if (!labels_path.empty()) data.true_labels = read_labels_csv(labels_path);

  const BasisSpec basis_spec =
      make_basis(data.grid.minCoeff(), data.grid.maxCoeff(), opt.basis_count, opt.order);
  const BasisMatrix basis = eval_basis(basis_spec, data.grid);
  const PriorConfig priors = build_fit_priors(data, basis, opt, truth_means_path, prior_s0,
                                              prior_a0, prior_r0, prior_alpha0, prior_beta0);

  FitOptions fit_options;
  fit_options.threshold = opt.threshold;
  fit_options.max_iter = opt.max_iter;
  fit_options.special_fn = parse_special(opt.special_fn);

  FitResult best;
  bool have_best = false;
  for (int restart = 0; restart < opt.restarts; ++restart) {
    KMeansOptions km;
    km.k = opt.k;
    km.restarts = 1;
    km.seed = stream_seed(opt.seed, 0x696e6974ULL, restart);
    km.seeding = opt.restarts > 1 ? KMeansSeeding::kRandomPoints : KMeansSeeding::kPlusPlus;
    const auto init = kmeans(data.y, km);
    FitResult fit = opt.model == "m2"
                        ? fit_model2(data, basis, priors,
                                     one_hot_responsibilities(init.labels, opt.k), fit_options)
                        : fit_model1(data, basis, priors,
                                     one_hot_responsibilities(init.labels, opt.k), fit_options);
    fit.seed = km.seed;
    if (!have_best || fit.final_elbo() > best.final_elbo()) {
      best = std::move(fit);
      have_best = true;
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json out;
  out["config"] = {{"model", opt.model},         {"k", opt.k},
                   {"basis", opt.basis_count},   {"order", opt.order},
                   {"threshold", opt.threshold}, {"max_iter", opt.max_iter},
                   {"special_fn", opt.special_fn}, {"seed", opt.seed},
                   {"restarts", opt.restarts},   {"data", data_path}};
  json assignments = json::array();
  for (int a : best.assignments) assignments.push_back(a + 1);  // clusters are 1..K on the wire
  out["assignments"] = assignments;
  out["responsibilities"] = matrix_to_json(best.state.resp);
  json coef = json::array();
  for (const auto& m : best.state.coef_mean) coef.push_back(vector_to_json(m));
  out["coefficients"] = coef;
  out["mean_curves"] = matrix_to_json(best.mean_curves);
  out["grid"] = vector_to_json(data.grid);
  out["elbo_trace"] = best.elbo_trace;
  out["iterations"] = best.iterations;
  out["converged"] = best.converged;
  out["wall_seconds"] = wall;
  out["init_seed"] = best.seed;
  if (data.has_labels()) {
    out["mismatch"] = mismatch_rate(best.assignments, data.true_labels);
    out["v_measure"] = v_measure(best.assignments, data.true_labels);
  }

  const std::string path = opt.out.empty() ? "fit.json" : opt.out;
  write_json(path, out);
  std::cout << "fit written to " << path << " (elbo " << best.final_elbo() << ", "
            << best.iterations << " iterations)\n";
  return 0;
}

// --------------------------------------------------------------- replicate

int run_replicate(int scenario_id, int replicates, const CommonOptions& opt) {
  ReplicateOptions ro;
  ro.scenario_id = scenario_id;
  ro.replicates = replicates;
  ro.seed = opt.seed;
  ro.restarts = opt.restarts;
  ro.model2 = opt.model == "m2";
  ro.fit.threshold = opt.threshold;
  ro.fit.max_iter = opt.max_iter;
  ro.fit.special_fn = parse_special(opt.special_fn);
  ro.workers = opt.workers;
  if (!opt.prior_preset.empty()) ro.prior_setting = prior_setting_from_name(opt.prior_preset);

  const ReplicationReport report = replicate_scenario(ro);
  const auto& s = report.summary;

  const fs::path dir = opt.out.empty() ? fs::path("replication") : fs::path(opt.out);
  fs::create_directories(dir);
  const std::string stem = "scenario" + std::to_string(scenario_id);

  json out;
  out["config"] = {{"scenario", scenario_id},   {"replicates", replicates},
                   {"model", opt.model},        {"seed", opt.seed},
                   {"restarts", opt.restarts},  {"threshold", opt.threshold},
                   {"max_iter", opt.max_iter},  {"special_fn", opt.special_fn},
                   {"prior_preset", opt.prior_preset.empty() ? "setting1" : opt.prior_preset},
                   {"workers", opt.workers}};
  out["vb"] = {{"mean_mismatch", s.mean_mismatch},
               {"sd_mismatch", s.sd_mismatch},
               {"mean_v_measure", s.mean_v_measure},
               {"sd_v_measure", s.sd_v_measure}};
  out["kmeans"] = {{"mean_mismatch", s.mean_kmeans_mismatch},
                   {"sd_mismatch", s.sd_kmeans_mismatch},
                   {"mean_v_measure", s.mean_kmeans_v_measure},
                   {"sd_v_measure", s.sd_kmeans_v_measure}};
  out["emise_per_cluster"] = vector_to_json(s.emise_per_cluster);
  out["failed_replicates"] = s.failed_replicates;
  out["total_wall_seconds"] = s.total_wall_seconds;
  write_json((dir / (stem + "_summary.json")).string(), out);

  // one-row table mirroring the simulation-result tables
  {
    std::ofstream table(dir / (stem + "_table.csv"));
    table.precision(10);
    table << "scenario,vb_mismatch,vb_mismatch_sd,vb_vmeasure,vb_vmeasure_sd,"
             "kmeans_mismatch,kmeans_mismatch_sd,kmeans_vmeasure,kmeans_vmeasure_sd\n";
    table << scenario_id << "," << s.mean_mismatch << "," << s.sd_mismatch << ","
          << s.mean_v_measure << "," << s.sd_v_measure << "," << s.mean_kmeans_mismatch << ","
          << s.sd_kmeans_mismatch << "," << s.mean_kmeans_v_measure << ","
          << s.sd_kmeans_v_measure << "\n";
  }
  {
    std::ofstream table(dir / (stem + "_emise.csv"));
    table.precision(10);
    table << "cluster,emise\n";
    for (Eigen::Index c = 0; c < s.emise_per_cluster.size(); ++c) {
      table << (c + 1) << "," << s.emise_per_cluster[c] << "\n";
    }
  }
  write_curves_csv((dir / (stem + "_emse.csv")).string(), report.grid, report.emse);

  std::cout << stem << ": VB mismatch " << s.mean_mismatch << " (sd " << s.sd_mismatch
            << "), V-measure " << s.mean_v_measure << "; k-means mismatch "
            << s.mean_kmeans_mismatch << "\n";
  return 0;
}

// ---------------------------------------------------------------- dic-scan

std::vector<int> parse_k_range(const std::string& text) {
  std::vector<int> ks;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!piece.empty()) ks.push_back(std::stoi(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ks;
}

int run_dic_scan(const std::string& data_path, const std::string& k_range, int fits_per_k,
                 const CommonOptions& opt, std::optional<double> prior_a0,
                 std::optional<double> prior_r0) {
  const FunctionalDataset data = read_dataset_csv(data_path);
  const BasisSpec basis_spec =
      make_basis(data.grid.minCoeff(), data.grid.maxCoeff(), opt.basis_count, opt.order);
  const BasisMatrix basis = eval_basis(basis_spec, data.grid);

  KScanOptions scan;
  scan.k_values = parse_k_range(k_range);
  if (scan.k_values.empty()) throw CLI::ValidationError("--k-range", "empty range");
  scan.fits_per_k = fits_per_k;
  scan.seed = opt.seed;
  scan.threshold = opt.threshold;
  scan.max_iter = opt.max_iter;
  scan.special_fn = parse_special(opt.special_fn);
  scan.workers = opt.workers;
  scan.shape_tau = prior_a0;
  scan.rate_tau = prior_r0;

  const KScanResult result = k_scan(data, basis, scan);

  json out;
  out["config"] = {{"data", data_path},         {"k_range", k_range},
                   {"fits_per_k", fits_per_k},  {"seed", opt.seed},
                   {"threshold", opt.threshold}, {"basis", opt.basis_count}};
  out["rows"] = json::array();
  for (const auto& row : result.rows) {
    json r = {{"k", row.k}, {"failed", row.failed}};
    if (row.failed) {
      r["error"] = row.error;
    } else {
      r["dic"] = row.dic;
      r["elbo"] = row.elbo;
    }
    out["rows"].push_back(r);
    if (!row.failed) {
      std::cout << "K=" << row.k << "  DIC=" << row.dic << "  ELBO=" << row.elbo << "\n";
    } else {
      std::cout << "K=" << row.k << "  failed: " << row.error << "\n";
    }
  }
  out["best_k"] = result.best_k;
  std::cout << "best K by DIC: " << result.best_k << "\n";

  write_json(opt.out.empty() ? "dic_scan.json" : opt.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional data clustering via mean-field variational Bayes"};
  app.require_subcommand(1);

  CommonOptions opt;

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate simulation scenario datasets");
  int scenario_id = 3;
  int replicates = 50;
  sim->add_option("--scenario", scenario_id, "scenario id 1..10")->required();
  sim->add_option("--replicates", replicates, "number of datasets");
  add_common_flags(sim, &opt, false);

  // fit
  auto* fit = app.add_subcommand("fit", "fit one dataset CSV");
  std::string data_path, labels_path, truth_means_path;
  double prior_s0 = 0.1, prior_a0 = 0.01, prior_r0 = 0.01, prior_alpha0 = 0.01,
         prior_beta0 = 0.01;
  fit->add_option("--data", data_path, "dataset CSV (first row 't,<grid>')")->required();
  fit->add_option("--labels", labels_path, "optional true labels CSV for evaluation");
  fit->add_option("--truth-means", truth_means_path, "true cluster mean curves (enables presets)");
  fit->add_option("--prior-s0", prior_s0, "coefficient prior variance when no preset");
  fit->add_option("--prior-a0", prior_a0, "Gamma shape for tau");
  fit->add_option("--prior-r0", prior_r0, "Gamma rate for tau");
  fit->add_option("--prior-alpha0", prior_alpha0, "Gamma shape for tau_a (m2)");
  fit->add_option("--prior-beta0", prior_beta0, "Gamma rate for tau_a (m2)");
  add_common_flags(fit, &opt);

  // replicate
  auto* rep = app.add_subcommand("replicate", "full simulation-study pipeline for one scenario");
  int rep_scenario = 3;
  int rep_count = 50;
  rep->add_option("--scenario", rep_scenario, "scenario id 1..10")->required();
  rep->add_option("--replicates", rep_count, "number of datasets");
  add_common_flags(rep, &opt);

  // dic-scan
  auto* scan = app.add_subcommand("dic-scan", "DIC over a range of K (independent-error model)");
  std::string scan_data, k_range = "2:5";
  int fits_per_k = 5;
  std::optional<double> scan_a0, scan_r0;
  scan->add_option("--data", scan_data, "dataset CSV")->required();
  scan->add_option("--k-range", k_range, "lo:hi or comma list, e.g. 2:5 or 2,3,4");
  scan->add_option("--fits-per-k", fits_per_k, "restarts per K, max-ELBO fit kept");
  double scan_a0_value = 0, scan_r0_value = 0;
  auto* a0_opt = scan->add_option("--prior-a0", scan_a0_value, "Gamma shape for tau (default: pilot estimate)");
  auto* r0_opt = scan->add_option("--prior-r0", scan_r0_value, "Gamma rate for tau (default: pilot estimate)");
  add_common_flags(scan, &opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (sim->parsed()) return run_simulate(scenario_id, replicates, opt);
    if (fit->parsed()) {
      return run_fit(data_path, labels_path, truth_means_path, opt, prior_s0, prior_a0,
                     prior_r0, prior_alpha0, prior_beta0);
    }
    if (rep->parsed()) {
      if (rep->count("--restarts") == 0) opt.restarts = 5;
      return run_replicate(rep_scenario, rep_count, opt);
    }
    if (scan->parsed()) {
      if (a0_opt->count() > 0) scan_a0 = scan_a0_value;
      if (r0_opt->count() > 0) scan_r0 = scan_r0_value;
      return run_dic_scan(scan_data, k_range, fits_per_k, opt, scan_a0, scan_r0);
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitData;
  } catch (const ShapeError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
