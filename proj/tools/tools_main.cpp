// smoothdiv command-line tool: compute divergences on operator files, run
// bracket sweeps, emit figure datasets, manage config.
//
// Exit codes: 0 success, 2 parse error, 3 solver failure, 4 domain error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothdiv/asymptotics.hpp"
#include "smoothdiv/divergences.hpp"
#include "smoothdiv/operators_io.hpp"
#include "smoothdiv/oracles.hpp"
#include "smoothdiv/randomness.hpp"
#include "smoothdiv/smoothing.hpp"

namespace sd = smoothdiv;
using nlohmann::json;

namespace {

std::string fmt12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct RunConfig {
  sd::SolverOptions solver;
  sd::SeesawOptions seesaw;
  int delta_points = 40;
  std::uint64_t seed = 0;
  std::string format = "csv";
};

RunConfig load_config(const std::string& explicit_path) {
  RunConfig cfg;
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SMOOTHDIV_CONFIG")) path = env;
  }
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw sd::ParseError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw sd::ParseError("invalid JSON in config '" + path + "': " + e.what());
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    cfg.solver.tol_abs = s.value("tol_abs", cfg.solver.tol_abs);
    cfg.solver.tol_rel = s.value("tol_rel", cfg.solver.tol_rel);
    cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
  }
  if (j.contains("seesaw")) {
    const auto& s = j["seesaw"];
    cfg.seesaw.restarts = s.value("restarts", cfg.seesaw.restarts);
    cfg.seesaw.max_iters = s.value("max_iters", cfg.seesaw.max_iters);
    cfg.seesaw.tol = s.value("tol", cfg.seesaw.tol);
  }
  if (j.contains("delta_grid")) cfg.delta_points = j["delta_grid"].value("points", cfg.delta_points);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.format = j.value("format", cfg.format);
  if (cfg.solver.tol_abs <= 0 || cfg.solver.tol_rel <= 0 || cfg.seesaw.tol <= 0)
    throw sd::ParseError("config '" + path + "': tolerances must be positive");
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  return json{{"solver",
               {{"tol_abs", cfg.solver.tol_abs},
                {"tol_rel", cfg.solver.tol_rel},
                {"max_iterations", cfg.solver.max_iterations}}},
              {"seesaw",
               {{"restarts", cfg.seesaw.restarts},
                {"max_iters", cfg.seesaw.max_iters},
                {"tol", cfg.seesaw.tol}}},
              {"delta_grid", {{"points", cfg.delta_points}}},
              {"seed", cfg.seed},
              {"format", cfg.format}};
}

// "a:b:k" -> k linearly spaced points from a to b
std::vector<double> parse_grid(const std::string& spec) {
  double a = 0, b = 0;
  int k = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &a, &b, &k) != 3 || k < 1)
    throw sd::ParseError("grid spec '" + spec + "' must be a:b:k with k >= 1");
  std::vector<double> g;
  g.reserve(k);
  for (int i = 0; i < k; ++i) g.push_back(k == 1 ? a : a + (b - a) * i / (k - 1.0));
  return g;
}

sd::DensityOperator load_state(const std::string& path) {
  return sd::make_density(sd::load_operator_json(path), sd::StateKind::normalized);
}

struct BracketRow {
  double eps, lower, upper, delta_star, gap;
};

void emit_bracket_rows(const std::vector<BracketRow>& rows, const std::string& format,
                       const std::string& header_comment) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"eps", r.eps},
                     {"lower", r.lower},
                     {"upper", r.upper},
                     {"delta_star", r.delta_star},
                     {"gap", r.gap}});
    std::cout << arr.dump(2) << "\n";
    return;
  }
  std::cout << "# " << header_comment << "\n";
  std::cout << "eps,lower,upper,delta_star,gap\n";
  for (const auto& r : rows)
    std::cout << fmt12(r.eps) << "," << fmt12(r.lower) << "," << fmt12(r.upper) << ","
              << fmt12(r.delta_star) << "," << fmt12(r.gap) << "\n";
}

std::vector<BracketRow> run_bracket_sweep(const sd::DensityOperator& rho, const sd::Matrix& sigma,
                                          const std::vector<double>& eps_grid, const RunConfig& cfg) {
  std::vector<BracketRow> rows;
  for (double eps : eps_grid) {
    sd::BracketOptions bo;
    bo.seesaw = cfg.seesaw;
    bo.seesaw.seed = cfg.seed;
    bo.solver = cfg.solver;
    bo.delta_grid = sd::default_delta_grid(eps, cfg.delta_points);
    sd::Bracket b = sd::bracket_dminf(rho, sigma, eps, bo);
    rows.push_back({eps, b.lower_bits, b.upper_bits, b.delta_star, b.upper_bits - b.lower_bits});
  }
  return rows;
}

int cmd_divergence(const std::string& kind, const std::string& rho_path, const std::string& sigma_path,
                   double alpha, double eps, int dim_a, const std::string& format,
                   const RunConfig& cfg) {
  sd::DensityOperator rho = load_state(rho_path);
  sd::Matrix sigma = sd::load_operator_json(sigma_path);

  sd::DivergenceValue v;
  if (kind == "relative") v = sd::relative_entropy(rho, sigma);
  else if (kind == "variance") v = sd::relative_entropy_variance(rho, sigma);
  else if (kind == "sandwiched") v = sd::sandwiched_renyi(rho, sigma, alpha);
  else if (kind == "petz") v = sd::petz_renyi(rho, sigma, alpha);
  else if (kind == "dmax") v = sd::d_max(rho, sigma);
  else if (kind == "dmin") v = sd::d_min_projector(rho, sigma);
  else if (kind == "dminf") v = sd::d_min_f(rho, sigma);
  else if (kind == "hypothesis") {
    sd::HypothesisTestingResult h = sd::hypothesis_testing(rho, sigma, eps, cfg.solver);
    v = {h.bits, true};
  } else if (kind == "mutual") {
    if (dim_a < 1) throw sd::DomainError("divergence mutual: pass --dim-a");
    sd::BipartiteLabel label(dim_a, rho.dim() / dim_a);
    auto mi = sd::mutual_information_and_variance(rho, label);
    if (format == "json") {
      std::cout << json{{"kind", kind}, {"value_bits", mi.bits}, {"variance_bits", mi.variance_bits}}
                       .dump()
                << "\n";
    } else {
      std::cout << fmt12(mi.bits) << " " << fmt12(mi.variance_bits) << "\n";
    }
    return 0;
  } else {
    throw sd::ParseError("unknown divergence kind '" + kind + "'");
  }

  if (format == "json") {
    json j{{"kind", kind}, {"support_condition_met", v.support_condition_met}};
    if (v.is_infinite()) j["value_bits"] = "inf";
    else j["value_bits"] = v.bits;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << fmt12(v.bits);
    if (v.is_infinite()) std::cout << " support_violated";
    std::cout << "\n";
  }
  return 0;
}

int cmd_figure(const std::string& name, int d, double p, double eps, std::uint64_t seed,
               const RunConfig& cfg) {
  if (name == "fig3") {
    sd::IsotropicState iso = sd::isotropic_state(d, p);
    std::vector<long long> ns;
    for (int i = 0; i < 25; ++i) {
      long long n = static_cast<long long>(std::llround(std::pow(10.0, 2.0 + 4.0 * i / 24.0)));
      if (ns.empty() || n > ns.back()) ns.push_back(n);
    }
    auto curves = sd::rate_curves(iso.state, iso.label, eps, ns);
    auto [iu, vu] = sd::mutual_information_and_variance(iso.state, iso.label);
    sd::CqState cq = sd::dephase_to_cq(iso.state, iso.label);
    auto [il, vl] = sd::mutual_information_and_variance(cq.joint(), cq.label());
    std::cout << "# smoothdiv-fig3-v1 d=" << d << " p=" << fmt12(p) << " eps=" << fmt12(eps)
              << " upper=product-relaxation\n";
    std::cout << "n,lower_curve,upper_curve,lower_asymptote,upper_asymptote\n";
    for (const auto& rb : curves)
      std::cout << rb.n << "," << fmt12(rb.lower_bits_per_copy) << ","
                << fmt12(rb.upper_bits_per_copy) << "," << fmt12(il) << "," << fmt12(iu) << "\n";
    return 0;
  }
  if (name == "fig4" || name == "fig5") {
    const int dim = name == "fig4" ? 2 : 4;
    sd::Rng rng(seed);
    sd::DensityOperator rho = sd::random_state(rng, dim);
    sd::DensityOperator sig = sd::random_state(rng, dim);
    std::vector<double> eps_grid = parse_grid("0.05:0.5:10");
    RunConfig c = cfg;
    c.seed = seed;
    auto rows = run_bracket_sweep(rho, sig.matrix(), eps_grid, c);
    emit_bracket_rows(rows, cfg.format, "smoothdiv-" + name + "-v1 dim=" + std::to_string(dim) +
                                            " seed=" + std::to_string(seed));
    return 0;
  }
  throw sd::ParseError("unknown figure '" + name + "'");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-shot smoothed quantum divergences: seesaw brackets, SDP bounds, rate curves"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "config file (JSON); env SMOOTHDIV_CONFIG also honored");

  // divergence
  auto* div = app.add_subcommand("divergence", "closed-form or SDP divergence on operator files");
  std::string div_kind, div_rho, div_sigma, div_format;
  double div_alpha = 0.5, div_eps = 0.0;
  int div_dim_a = 0;
  div->add_option("kind", div_kind,
                  "relative|variance|sandwiched|petz|dmax|dmin|dminf|hypothesis|mutual")
      ->required();
  div->add_option("rho", div_rho, "state JSON file")->required();
  div->add_option("sigma", div_sigma, "PSD operator JSON file")->required();
  div->add_option("--alpha", div_alpha, "Renyi order");
  div->add_option("--eps", div_eps, "smoothing / error parameter");
  div->add_option("--dim-a", div_dim_a, "dimension of subsystem A (mutual)");
  div->add_option("--format", div_format, "csv|json");

  // bracket
  auto* br = app.add_subcommand("bracket", "seesaw lower + delta-swept upper bracket sweep");
  std::string br_rho, br_sigma, br_eps_grid = "0.05:0.5:10", br_delta_grid, br_format;
  int br_restarts = -1;
  std::uint64_t br_seed = 0;
  bool br_seed_set = false;
  br->add_option("rho", br_rho)->required();
  br->add_option("sigma", br_sigma)->required();
  br->add_option("--eps-grid", br_eps_grid, "a:b:k linear grid of smoothing parameters");
  br->add_option("--delta-grid", br_delta_grid, "a:b:k linear grid of delta values (default: log grid)");
  br->add_option("--restarts", br_restarts, "seesaw restarts");
  br->add_option("--seed", br_seed, "seesaw restart seed")->each([&](const std::string&) {
    br_seed_set = true;
  });
  br->add_option("--format", br_format, "csv|json");

  // figure
  auto* fig = app.add_subcommand("figure", "emit figure datasets (fig3, fig4, fig5)");
  std::string fig_name;
  int fig_d = 2;
  double fig_p = 0.3, fig_eps = 1e-4;
  std::uint64_t fig_seed = 1;
  fig->add_option("name", fig_name, "fig3|fig4|fig5")->required();
  fig->add_option("--d", fig_d, "isotropic local dimension (fig3)");
  fig->add_option("--p", fig_p, "isotropic noise parameter (fig3)");
  fig->add_option("--eps", fig_eps, "error parameter (fig3)");
  fig->add_option("--seed", fig_seed, "random-state seed (fig4/fig5)");

  // hmin
  auto* hm = app.add_subcommand("hmin", "smooth conditional min-entropy (primal, dual, gap)");
  std::string hm_rho;
  int hm_da = 0, hm_db = 0;
  double hm_eps = 0.0;
  hm->add_option("rho", hm_rho)->required();
  hm->add_option("--dim-a", hm_da)->required();
  hm->add_option("--dim-b", hm_db)->required();
  hm->add_option("--eps", hm_eps, "purified-distance smoothing parameter");

  // smooth-dmax
  auto* sdm = app.add_subcommand("smooth-dmax", "smooth max-relative entropy (primal, dual, gap)");
  std::string sdm_rho, sdm_sigma, sdm_set = "sub";
  double sdm_eps = 0.0;
  sdm->add_option("rho", sdm_rho)->required();
  sdm->add_option("sigma", sdm_sigma)->required();
  sdm->add_option("--eps", sdm_eps);
  sdm->add_option("--set", sdm_set, "sub|norm smoothing set");

  // gen
  auto* gen = app.add_subcommand("gen", "write a random operator JSON file");
  std::string gen_kind, gen_out;
  int gen_dim = 2, gen_rank = 2;
  std::uint64_t gen_seed = 0;
  gen->add_option("kind", gen_kind, "state|psd|channel")->required();
  gen->add_option("-o,--out", gen_out)->required();
  gen->add_option("--dim", gen_dim);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--kraus-rank", gen_rank);

  // config
  auto* cfg_cmd = app.add_subcommand("config", "show or initialize the run configuration");
  std::string cfg_action = "show", cfg_out;
  cfg_cmd->add_option("action", cfg_action, "show|init");
  cfg_cmd->add_option("-o,--out", cfg_out, "output path for init");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = load_config(config_path);

    if (*div) {
      std::string format = div_format.empty() ? cfg.format : div_format;
      return cmd_divergence(div_kind, div_rho, div_sigma, div_alpha, div_eps, div_dim_a,
                            format, cfg);
    }
    if (*br) {
      if (br_restarts > 0) cfg.seesaw.restarts = br_restarts;
      if (br_seed_set) cfg.seed = br_seed;
      if (!br_format.empty()) cfg.format = br_format;
      sd::DensityOperator rho = load_state(br_rho);
      sd::Matrix sigma = sd::load_operator_json(br_sigma);
      std::vector<double> eps_grid = parse_grid(br_eps_grid);
      if (eps_grid.empty()) throw sd::EmptyGrid("bracket: empty eps grid");
      std::vector<BracketRow> rows;
      for (double eps : eps_grid) {
        sd::BracketOptions bo;
        bo.seesaw = cfg.seesaw;
        bo.seesaw.seed = cfg.seed;
        bo.solver = cfg.solver;
        bo.delta_grid = br_delta_grid.empty() ? sd::default_delta_grid(eps, cfg.delta_points)
                                              : parse_grid(br_delta_grid);
        sd::Bracket b = sd::bracket_dminf(rho, sigma, eps, bo);
        rows.push_back({eps, b.lower_bits, b.upper_bits, b.delta_star, b.upper_bits - b.lower_bits});
      }
      emit_bracket_rows(rows, cfg.format, "smoothdiv-bracket-v1");
      return 0;
    }
    if (*fig) return cmd_figure(fig_name, fig_d, fig_p, fig_eps, fig_seed, cfg);
    if (*hm) {
      sd::DensityOperator rho = load_state(hm_rho);
      sd::SmoothingResult r = sd::smooth_hmin(rho, sd::BipartiteLabel(hm_da, hm_db), hm_eps, cfg.solver);
      std::cout << "primal_bits,dual_bits,gap\n"
                << fmt12(r.value_bits) << "," << fmt12(r.dual_bits) << "," << fmt12(r.gap) << "\n";
      return 0;
    }
    if (*sdm) {
      sd::DensityOperator rho = load_state(sdm_rho);
      sd::Matrix sigma = sd::load_operator_json(sdm_sigma);
      sd::SmoothingSet set;
      if (sdm_set == "sub") set = sd::SmoothingSet::subnormalized;
      else if (sdm_set == "norm") set = sd::SmoothingSet::normalized;
      else throw sd::ParseError("--set must be sub or norm");
      sd::SmoothingResult r = sd::smooth_dmax(rho, sigma, sdm_eps, set, cfg.solver);
      std::cout << "primal_bits,dual_bits,gap\n"
                << fmt12(r.value_bits) << "," << fmt12(r.dual_bits) << "," << fmt12(r.gap) << "\n";
      return 0;
    }
    if (*gen) {
      if (gen_kind == "state") {
        sd::save_operator_json(gen_out, sd::random_state(gen_seed, gen_dim).matrix());
      } else if (gen_kind == "psd") {
        sd::save_operator_json(gen_out, sd::random_psd(gen_seed, gen_dim));
      } else if (gen_kind == "channel") {
        sd::save_channel_json(gen_out, sd::random_channel(gen_seed, gen_dim, gen_rank));
      } else {
        throw sd::ParseError("gen kind must be state|psd|channel");
      }
      return 0;
    }
    if (*cfg_cmd) {
      if (cfg_action == "show") {
        std::cout << config_to_json(cfg).dump(2) << "\n";
      } else if (cfg_action == "init") {
        if (cfg_out.empty()) throw sd::ParseError("config init: pass -o PATH");
        std::ofstream out(cfg_out);
        if (!out) throw sd::ParseError("cannot write '" + cfg_out + "'");
        out << config_to_json(RunConfig{}).dump(2) << "\n";
      } else {
        throw sd::ParseError("config action must be show or init");
      }
      return 0;
    }
  } catch (const sd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sd::SolverFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sd::AllRestartsFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
