#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <iostream>
#include <set>

#include "fracspde/config.hpp"
#include "fracspde/csv.hpp"
#include "fracspde/gamma.hpp"
#include "fracspde/mild_solver.hpp"
#include "fracspde/mittag_leffler.hpp"
#include "fracspde/noise.hpp"
#include "fracspde/norm_estimator.hpp"
#include "fracspde/spectral_kernels.hpp"

namespace fracspde::cli {

namespace {

using config::ConfigMap;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitContract = 2;

ConfigMap flags_as_config(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::map<std::string, std::string> m;
  for (const auto& [k, v] : kv) m.emplace(k, v);
  return ConfigMap(m);
}

spectral::FourierField field_from_modes(const spectral::SpatialGrid& grid,
                                        const std::string& spec) {
  spectral::FourierField f(grid);
  for (const auto& ma : config::parse_mode_list(spec, grid.dim)) {
    f.at(ma.mode) += std::complex<double>(ma.re, ma.im);
  }
  return f;
}

frac::FracOrders orders_from(const ConfigMap& cfg) {
  frac::FracOrders o;
  o.beta = cfg.get_double("beta");
  o.gamma = cfg.get_double("gamma");
  o.eps0 = cfg.get_double("eps0", 0.1);
  return o;
}

// ---------------------------------------------------------------- validate

int cmd_validate(double beta, double gamma, double eps0, double sigma_norm,
                 double mu_norm, bool white_noise) {
  frac::FracOrders orders{beta, gamma, eps0};
  solver::CoefficientSet coeffs;
  solver::CoefficientSet* cp = nullptr;
  if (sigma_norm != 0.0 || mu_norm != 0.0) {
    coeffs.dim = 1;
    if (sigma_norm != 0.0) coeffs.sigma.push_back({{{sigma_norm, 0, 0}, {0, 0, 0}, {0, 0, 0}}});
    if (mu_norm != 0.0) coeffs.mu.push_back({mu_norm, 0, 0});
    cp = &coeffs;
  }
  auto rep = solver::validate_orders(orders, cp, white_noise);
  std::cout << "orders: beta=" << beta << " gamma=" << gamma << " eps0=" << eps0 << "\n"
            << "gamma0=" << rep.gamma0 << " sigma0=" << rep.sigma0 << "\n"
            << "white-noise feasible: " << (rep.white_noise_feasible ? "yes" : "no")
            << " (needs gamma < 1/2 + 3 beta/4 = " << rep.white_noise_gamma_bound << ")\n"
            << rep.summary() << "\n";
  return rep.ok ? kExitOk : kExitValidation;
}

// ----------------------------------------------------------------- ml-eval

int cmd_ml_eval(double beta, double gamma_ml, const std::string& zrange,
                double accuracy, const std::string& out) {
  const auto zs = config::parse_range(zrange);
  ConfigMap cfg = flags_as_config({{"beta", csv::Writer::format(beta)},
                                   {"gamma_ml", csv::Writer::format(gamma_ml)},
                                   {"z", zrange}});
  csv::Writer w(out, {"z", "value"}, cfg.canonical_hash(), 0);
  const ml::MLParams params{beta, gamma_ml, accuracy};
  for (double z : zs) w.row({z, ml::ml(params, z)});
  std::cout << out << ": " << w.rows_written() << " rows\n";
  return kExitOk;
}

// -------------------------------------------------------------- kernel-table

int cmd_kernel_table(double beta, double gamma, double eps0, double horizon,
                     int steps, int dim, int points, double length,
                     const std::string& out) {
  frac::FracOrders orders{beta, gamma, eps0};
  auto rep = solver::validate_orders(orders);
  if (!rep.ok) {
    std::cerr << rep.summary() << "\n";
    return kExitValidation;
  }
  frac::TimeGrid tgrid(horizon, steps);
  spectral::SpatialGrid sgrid(dim, length, points);
  spectral::KernelTable table(orders, tgrid, sgrid);
  ConfigMap cfg = flags_as_config({{"beta", csv::Writer::format(beta)},
                                   {"gamma", csv::Writer::format(gamma)},
                                   {"T", csv::Writer::format(horizon)},
                                   {"steps", std::to_string(steps)},
                                   {"points", std::to_string(points)}});
  csv::Writer w(out, {"t", "lambda", "p", "q", "P"}, cfg.canonical_hash(), 0);
  const double h = tgrid.dt();
  for (int m = 1; m <= tgrid.steps; ++m) {
    const double t = m * h;
    for (std::int64_t lvl = 0; lvl <= sgrid.max_level(); ++lvl) {
      if (!table.has_level(lvl)) continue;
      const double lam = sgrid.lambda_of_level(lvl);
      w.row({t, lam, table.p(m, lvl),
             spectral::kernel_symbol(spectral::KernelKind::Q, orders, t, lam),
             table.pbg(m, lvl)});
    }
  }
  std::cout << out << ": " << w.rows_written() << " rows\n";
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

std::set<std::string> simulate_schema() {
  std::set<std::string> s{"kind", "beta",  "gamma", "eps0",   "T",
                          "steps", "dim",  "points", "length", "seed", "K",
                          "u0",    "f",    "form",   "tol",    "max_iters",
                          "a_diag", "a_pert_amp", "a_pert_mode", "b", "c",
                          "sigma_diag", "mu_diag", "nu", "f_nonlin", "g_nonlin",
                          "workers"};
  for (int k = 0; k < 8; ++k) s.insert("g" + std::to_string(k));
  return s;
}

solver::Nonlinearity parse_nonlin(const std::string& text) {
  solver::Nonlinearity nl;
  if (text.empty() || text == "none") return nl;
  std::vector<std::string> parts;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ':')) parts.push_back(tok);
  if (parts[0] == "linear") {
    nl.kind = solver::Nonlinearity::Kind::Linear;
  } else if (parts[0] == "sin") {
    nl.kind = solver::Nonlinearity::Kind::Sin;
  } else if (parts[0] == "supcap") {
    nl.kind = solver::Nonlinearity::Kind::TruncatedSup;
    if (parts.size() >= 3) nl.cap = std::stod(parts[2]);
  } else {
    throw std::invalid_argument("nonlinearity: unknown kind '" + parts[0] +
                                "' (catalog: linear, sin, supcap)");
  }
  nl.amplitude = parts.size() >= 2 ? std::stod(parts[1]) : 1.0;
  return nl;
}

struct SimulateSetup {
  frac::FracOrders orders;
  frac::TimeGrid tgrid{1.0, 64};
  spectral::SpatialGrid sgrid;
  spectral::FourierField u0, f;
  std::vector<spectral::FourierField> g;
  noise::NoiseSpec nspec;
  bool quasilinear = false;
  solver::QuasilinearProblem qp;
};

SimulateSetup simulate_setup(const ConfigMap& cfg) {
  cfg.require_known(simulate_schema());
  SimulateSetup s;
  s.orders = orders_from(cfg);
  s.tgrid = frac::TimeGrid(cfg.get_double("T", 1.0), cfg.get_int("steps", 128));
  s.sgrid = spectral::SpatialGrid(cfg.get_int("dim", 1),
                                  cfg.get_double("length", 2.0 * M_PI),
                                  cfg.get_int("points", 16));
  s.u0 = spectral::FourierField(s.sgrid);
  s.f = spectral::FourierField(s.sgrid);
  if (cfg.has("u0")) s.u0 = field_from_modes(s.sgrid, cfg.raw("u0"));
  if (cfg.has("f")) s.f = field_from_modes(s.sgrid, cfg.raw("f"));
  for (int k = 0; k < 8; ++k) {
    const std::string key = "g" + std::to_string(k);
    if (cfg.has(key)) {
      while (static_cast<int>(s.g.size()) < k) s.g.emplace_back(s.sgrid);
      s.g.push_back(field_from_modes(s.sgrid, cfg.raw(key)));
    }
  }
  s.nspec.seed = cfg.get_u64("seed", 12345);
  s.nspec.mode_count =
      std::max(cfg.get_int("K", 1), std::max<int>(1, static_cast<int>(s.g.size())));

  s.quasilinear = cfg.get_string("kind", "model") == "quasilinear";
  if (s.quasilinear) {
    auto& q = s.qp;
    q.orders = s.orders;
    q.tgrid = s.tgrid;
    q.sgrid = s.sgrid;
    q.u0 = s.u0;
    q.f_det = s.f;
    q.g_det = s.g;
    q.noise_spec = s.nspec;
    q.form = cfg.get_string("form", "nondiv") == "div" ? solver::EquationForm::Divergence
                                                       : solver::EquationForm::NonDivergence;
    q.tol = cfg.get_double("tol", 1e-8);
    q.max_iters = cfg.get_int("max_iters", 50);
    q.coeffs.dim = s.sgrid.dim;
    if (cfg.has("a_diag")) {
      const double ad = cfg.get_double("a_diag");
      for (int i = 0; i < 3; ++i) q.coeffs.a[i][i] = ad;
    }
    q.coeffs.a_pert_amp = cfg.get_double("a_pert_amp", 0.0);
    if (cfg.has("a_pert_mode")) {
      auto pm = config::parse_mode_list(cfg.raw("a_pert_mode") + ":0", s.sgrid.dim);
      q.coeffs.a_pert_mode = pm.at(0).mode;
    }
    if (cfg.has("b")) q.coeffs.b[0] = cfg.get_double("b");
    q.coeffs.c = cfg.get_double("c", 0.0);
    if (cfg.has("sigma_diag")) {
      std::array<std::array<double, 3>, 3> sm{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
      const double sv = cfg.get_double("sigma_diag");
      for (int i = 0; i < 3; ++i) sm[i][i] = sv;
      q.coeffs.sigma.push_back(sm);
    }
    if (cfg.has("mu_diag")) q.coeffs.mu.push_back({cfg.get_double("mu_diag"), 0, 0});
    if (cfg.has("nu")) q.coeffs.nu.push_back(cfg.get_double("nu"));
    q.f_nonlin = parse_nonlin(cfg.get_string("f_nonlin", "none"));
    q.g_nonlin = parse_nonlin(cfg.get_string("g_nonlin", "none"));
  }
  return s;
}

int cmd_simulate(const std::string& config_path, const std::string& out,
                 const std::string& noise_out) {
  ConfigMap cfg = ConfigMap::parse_file(config_path);
  SimulateSetup s = simulate_setup(cfg);

  solver::SolutionPath path;
  if (s.quasilinear) {
    auto res = solver::solve_quasilinear(s.qp);
    path = std::move(res.path);
    std::cout << "picard iterations: " << res.iterations << ", distances:";
    for (double d : res.distances) std::cout << " " << csv::Writer::format(d);
    std::cout << "\n";
  } else {
    solver::ModelProblem p;
    p.orders = s.orders;
    p.tgrid = s.tgrid;
    p.sgrid = s.sgrid;
    p.u0 = s.u0;
    p.f_const = s.f;
    p.g = s.g;
    p.noise_spec = s.nspec;
    path = solver::solve_model(p);
  }

  csv::Writer w(out, {"t", "mode", "re", "im"}, cfg.canonical_hash(), s.nspec.seed);
  const std::int64_t modes = path.mode_count();
  for (int j = 0; j <= path.tgrid.steps; ++j) {
    for (std::int64_t i = 0; i < modes; ++i) {
      const auto v = path.value(j, i);
      w.row({path.tgrid.node(j), double(i), v.real(), v.imag()});
    }
  }
  std::cout << out << ": " << w.rows_written() << " rows\n";

  if (!noise_out.empty()) {
    auto nr = noise::sample_wiener(s.nspec, s.tgrid, 0);
    csv::Writer nw(noise_out, {"k", "j", "t", "dW"}, cfg.canonical_hash(), s.nspec.seed);
    for (int k = 0; k < nr.spec.mode_count; ++k)
      for (int j = 0; j < s.tgrid.steps; ++j)
        nw.row({double(k), double(j), s.tgrid.node(j), nr.dW(k, j)});
    std::cout << noise_out << ": " << nw.rows_written() << " rows\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- mc-verify

int cmd_mc_verify(const std::string& config_path, const std::string& out, int samples) {
  ConfigMap cfg = ConfigMap::parse_file(config_path);
  SimulateSetup s = simulate_setup(cfg);
  if (s.quasilinear || s.g.empty())
    throw std::invalid_argument("mc-verify: needs a linear model problem with noise");

  solver::ModelProblem p;
  p.orders = s.orders;
  p.tgrid = s.tgrid;
  p.sgrid = s.sgrid;
  p.u0 = s.u0;
  p.f_const = s.f;
  p.g = s.g;
  p.noise_spec = s.nspec;

  // The driven mode: first nonzero coefficient of g[0].
  std::array<int, 3> mode{0, 0, 0};
  double gamp = 0.0;
  for (std::int64_t i = 0; i < s.sgrid.total_points(); ++i) {
    if (s.g[0].modes[i] != std::complex<double>{}) {
      mode = s.sgrid.unflatten(i);
      gamp = std::abs(s.g[0].modes[i]);
      break;
    }
  }
  const double lambda = s.sgrid.mode_factor() *
                        (double(mode[0]) * mode[0] + double(mode[1]) * mode[1] +
                         double(mode[2]) * mode[2]);

  spectral::KernelTable table(s.orders, s.tgrid, s.sgrid);
  double sum = 0.0, sum2 = 0.0;
  for (int m = 0; m < samples; ++m) {
    auto nr = noise::sample_wiener(p.noise_spec, s.tgrid, std::uint64_t(m));
    const auto v = solver::terminal_mode_value(p, table, nr, mode);
    const double x = std::norm(v);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / samples;
  const double var_of_x = (sum2 - samples * mean * mean) / (samples - 1);
  const double se = std::sqrt(var_of_x / samples);

  const double beta = s.orders.beta, gamma = s.orders.gamma;
  auto kernel = [&](double t) {
    return std::pow(t, beta - gamma) *
           ml::ml({beta, 1.0 + beta - gamma, 1e-10}, -lambda * std::pow(t, beta));
  };
  const double oracle = gamp * gamp *
      noise::ito_isometry_oracle(kernel, s.tgrid.horizon, beta - gamma);

  const double z = (mean - oracle) / se;
  csv::Writer w(out, {"beta", "gamma", "lambda", "mc_mean_sq", "stderr", "oracle", "zscore"},
                cfg.canonical_hash(), s.nspec.seed);
  w.row({beta, gamma, lambda, mean, se, oracle, z});
  std::cout << "mc-verify: E|u(T)|^2 = " << mean << " +- " << se << ", oracle = " << oracle
            << ", z = " << z << "\n";
  return std::abs(z) <= 3.0 ? kExitOk : kExitContract;
}

// ---------------------------------------------------------- regularity-probe

int cmd_regularity_probe(const std::string& config_path, const std::string& out) {
  ConfigMap cfg = ConfigMap::parse_file(config_path);
  cfg.require_known({"beta", "gamma", "eps0", "sigmas", "n_list", "samples", "T",
                     "steps", "seed", "ladder", "ladder_growth", "workers"});
  frac::FracOrders orders = orders_from(cfg);

  std::vector<double> sigmas;
  {
    std::istringstream is(cfg.get_string("sigmas", "1.0,1.5"));
    std::string tok;
    while (std::getline(is, tok, ',')) sigmas.push_back(std::stod(tok));
  }
  std::vector<int> ns;
  {
    std::istringstream is(cfg.get_string("n_list", "16,32,64"));
    std::string tok;
    while (std::getline(is, tok, ',')) ns.push_back(std::stoi(tok));
  }
  norms::ProbeConfig pc;
  pc.horizon = cfg.get_double("T", 1.0);
  pc.time_steps = cfg.get_int("steps", pc.time_steps);
  pc.samples = cfg.get_int("samples", 200);
  pc.seed = cfg.get_u64("seed", 20240801);
  if (cfg.has("ladder")) {
    pc.ladder.clear();
    std::istringstream is(cfg.raw("ladder"));
    std::string tok;
    while (std::getline(is, tok, ',')) pc.ladder.push_back(std::stoi(tok));
  }
  pc.ladder_growth = cfg.get_double("ladder_growth", pc.ladder_growth);
  pc.workers = cfg.get_int("workers", 0);

  auto rows = norms::regularity_probe(orders, sigmas, ns, pc);
  csv::Writer w(out, {"sigma", "n", "estimate", "stderr", "ratio"}, cfg.canonical_hash(),
                pc.seed);
  const double thr = norms::threshold_sigma(orders);
  bool contradiction = false;
  for (const auto& r : rows) {
    w.row({r.sigma, double(r.n), r.estimate, r.stderr_, r.ratio});
    if (r.ratio != 0.0) {
      if (r.sigma <= thr - 0.25 && r.ratio > 1.2) contradiction = true;
      if (r.sigma >= thr + 0.25 && r.ratio < 1.5) contradiction = true;
    }
  }
  std::cout << out << ": " << w.rows_written() << " rows; threshold sigma = " << thr
            << (contradiction ? " (CONTRADICTION)" : "") << "\n";
  return contradiction ? kExitContract : kExitOk;
}

// -------------------------------------------------------------- gronwall-check

int cmd_gronwall_check(double beta, double b, double horizon, int steps,
                       const std::string& out) {
  frac::TimeGrid grid(horizon, steps);
  frac::RealPath a = frac::RealPath::sample(grid, [](double) { return 1.0; });
  auto eta = norms::volterra_iterate(a, b, beta);
  auto bound = norms::gronwall_bound_path(a, b, beta);
  ConfigMap cfg = flags_as_config({{"beta", csv::Writer::format(beta)},
                                   {"b", csv::Writer::format(b)},
                                   {"T", csv::Writer::format(horizon)},
                                   {"steps", std::to_string(steps)}});
  csv::Writer w(out, {"t", "iterate", "bound"}, cfg.canonical_hash(), 0);
  // Constant a saturates the bound with equality, so the discrete iterate
  // is allowed its quadrature error, O(h^(1+beta)), before a violation is
  // declared.
  const double slack = 2e-3;
  bool violated = false;
  for (int j = 0; j < grid.nodes(); ++j) {
    w.row({grid.node(j), eta.values[j], bound.values[j]});
    if (eta.values[j] > bound.values[j] * (1.0 + slack)) violated = true;
  }
  std::cout << out << ": " << w.rows_written() << " rows"
            << (violated ? " (BOUND VIOLATED)" : "") << "\n";
  return violated ? kExitContract : kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"fracspde: fractional-time stochastic PDE toolbox"};
  app.require_subcommand(1);

  // validate
  double v_beta = 0.5, v_gamma = 0.25, v_eps0 = 0.1, v_sigma = 0.0, v_mu = 0.0;
  bool v_white = false;
  auto* validate = app.add_subcommand("validate", "check order and coefficient constraints");
  validate->add_option("--beta", v_beta)->required();
  validate->add_option("--gamma", v_gamma)->required();
  validate->add_option("--eps0", v_eps0);
  validate->add_option("--sigma-norm", v_sigma, "l2 size of second-order stochastic coefficients");
  validate->add_option("--mu-norm", v_mu, "l2 size of gradient stochastic coefficients");
  validate->add_flag("--white-noise", v_white, "check space-time white-noise feasibility");

  // ml-eval
  double m_beta = 0.5, m_gamma = 1.0, m_acc = 1e-8;
  std::string m_z = "-1..1:0.1", m_out = "ml-eval.csv";
  auto* mleval = app.add_subcommand("ml-eval", "tabulate E_{beta,gamma}(z)");
  mleval->add_option("--beta", m_beta)->required();
  mleval->add_option("--gamma-ml", m_gamma);
  mleval->add_option("--z", m_z, "range a..b[:step]");
  mleval->add_option("--accuracy", m_acc);
  mleval->add_option("-o,--output", m_out);

  // kernel-table
  double k_beta = 0.5, k_gamma = 0.25, k_eps0 = 0.1, k_T = 1.0, k_len = 2.0 * M_PI;
  int k_steps = 32, k_dim = 1, k_points = 8;
  std::string k_out = "kernel-table.csv";
  auto* ktab = app.add_subcommand("kernel-table", "dump p/q/P symbols per (t, lambda)");
  ktab->add_option("--beta", k_beta)->required();
  ktab->add_option("--gamma", k_gamma)->required();
  ktab->add_option("--eps0", k_eps0);
  ktab->add_option("--T", k_T);
  ktab->add_option("--steps", k_steps);
  ktab->add_option("--dim", k_dim);
  ktab->add_option("--points", k_points);
  ktab->add_option("--length", k_len);
  ktab->add_option("-o,--output", k_out);

  // simulate
  std::string s_cfg, s_out = "simulate.csv", s_noise;
  auto* sim = app.add_subcommand("simulate", "solve a configured problem, dump (t, mode, re, im)");
  sim->add_option("config", s_cfg, "key = value configuration file")->required();
  sim->add_option("-o,--output", s_out);
  sim->add_option("--dump-noise", s_noise, "also dump the Brownian increments");

  // mc-verify
  std::string mv_cfg, mv_out = "mc-verify.csv";
  int mv_samples = 10000;
  auto* mcv = app.add_subcommand("mc-verify", "Monte Carlo second moment vs quadrature oracle");
  mcv->add_option("config", mv_cfg)->required();
  mcv->add_option("-o,--output", mv_out);
  mcv->add_option("--samples", mv_samples);

  // regularity-probe
  std::string rp_cfg, rp_out = "regularity-probe.csv";
  auto* rprobe = app.add_subcommand("regularity-probe", "refinement behavior across the threshold");
  rprobe->add_option("config", rp_cfg)->required();
  rprobe->add_option("-o,--output", rp_out);

  // gronwall-check
  double g_beta = 0.5, g_b = 1.0, g_T = 1.0;
  int g_steps = 2048;
  std::string g_out = "gronwall-check.csv";
  auto* gron = app.add_subcommand("gronwall-check", "Volterra iterate vs Gronwall bound");
  gron->add_option("--beta", g_beta)->required();
  gron->add_option("--b", g_b)->required();
  gron->add_option("--T", g_T);
  gron->add_option("--steps", g_steps);
  gron->add_option("-o,--output", g_out);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (validate->parsed()) return cmd_validate(v_beta, v_gamma, v_eps0, v_sigma, v_mu, v_white);
    if (mleval->parsed()) return cmd_ml_eval(m_beta, m_gamma, m_z, m_acc, m_out);
    if (ktab->parsed())
      return cmd_kernel_table(k_beta, k_gamma, k_eps0, k_T, k_steps, k_dim, k_points, k_len, k_out);
    if (sim->parsed()) return cmd_simulate(s_cfg, s_out, s_noise);
    if (mcv->parsed()) return cmd_mc_verify(mv_cfg, mv_out, mv_samples);
    if (rprobe->parsed()) return cmd_regularity_probe(rp_cfg, rp_out);
    if (gron->parsed()) return cmd_gronwall_check(g_beta, g_b, g_T, g_steps, g_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  }
  return kExitOk;
}

} // namespace fracspde::cli
