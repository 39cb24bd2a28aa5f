#include "fracspde/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracspde/dft.hpp"
#include "fracspde/gamma.hpp"

namespace fracspde::solver {

namespace {

constexpr int kDirectCutoff = 2048;

using Cplx = std::complex<double>;

// c[n] = sum_{m=1..n} ker[m] x[n-m], n = 0..N; ker indexed 1..N, x indexed 0..N-1
// (left-endpoint stochastic layout) or 0..N (deterministic layout, see below).
std::vector<Cplx> causal_convolution(const std::vector<double>& ker,
                                     const std::vector<Cplx>& x) {
  const int N = static_cast<int>(ker.size()) - 1;
  const int xn = static_cast<int>(x.size());
  std::vector<Cplx> out(N + 1, Cplx{});
  if (N <= kDirectCutoff) {
    for (int n = 1; n <= N; ++n) {
      Cplx acc{};
      const int m_lo = std::max(1, n - xn + 1);
      for (int m = m_lo; m <= n; ++m) acc += ker[m] * x[n - m];
      out[n] = acc;
    }
    return out;
  }
  std::vector<Cplx> kc(N + 1, Cplx{});
  for (int m = 0; m <= N; ++m) kc[m] = ker[m]; // ker[0] = 0
  auto c = dft::convolve(kc, x);
  for (int n = 1; n <= N; ++n) out[n] = c[n];
  return out;
}

} // namespace

int CoefficientSet::stream_count() const {
  return static_cast<int>(std::max({sigma.size(), mu.size(), nu.size()}));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (ok) {
    os << "accepted";
  } else {
    os << "rejected:";
    for (const auto& v : violations) os << "\n  - " << v.constraint << ": " << v.detail;
  }
  return os.str();
}

ValidationReport validate_orders(const frac::FracOrders& orders,
                                 const CoefficientSet* coeffs, bool white_noise) {
  ValidationReport rep;
  auto fail = [&](std::string c, std::string d) {
    rep.ok = false;
    rep.violations.push_back({std::move(c), std::move(d)});
  };

  if (!(orders.beta > 0.0 && orders.beta < 1.0))
    fail("beta in (0,1)", "beta = " + std::to_string(orders.beta));
  if (!(orders.gamma > 0.0 && orders.gamma < 1.0))
    fail("gamma in (0,1)", "gamma = " + std::to_string(orders.gamma));
  if (!(orders.eps0 > 0.0 && orders.eps0 < 1.0))
    fail("eps0 in (0,1)", "eps0 = " + std::to_string(orders.eps0));

  if (orders.beta > 0.0 && orders.gamma > 0.0 && !orders.compatible()) {
    fail("gamma < beta + 1/2",
         "gamma = " + std::to_string(orders.gamma) + " >= beta + 1/2 = " +
             std::to_string(orders.beta + 0.5));
  }
  rep.gamma0 = orders.gamma0();
  rep.sigma0 = orders.sigma0();
  if (!(rep.gamma0 < 2.0))
    fail("gamma0 < 2", "gamma0 = " + std::to_string(rep.gamma0));

  if (coeffs) {
    const int d = coeffs->dim;
    // Ellipticity sampled over coordinate and diagonal directions and over
    // the perturbation's extrema.
    std::vector<std::array<double, 3>> dirs;
    for (int i = 0; i < d; ++i) {
      std::array<double, 3> e{0, 0, 0};
      e[i] = 1.0;
      dirs.push_back(e);
    }
    if (d >= 2) {
      for (double s : {1.0, -1.0}) {
        std::array<double, 3> e{1.0 / std::sqrt(2.0), s / std::sqrt(2.0), 0};
        dirs.push_back(e);
      }
    }
    for (double pert : {-coeffs->a_pert_amp, 0.0, coeffs->a_pert_amp}) {
      for (const auto& xi : dirs) {
        double quad = 0.0, norm2 = 0.0;
        for (int i = 0; i < d; ++i) {
          norm2 += xi[i] * xi[i];
          for (int j = 0; j < d; ++j) {
            const double aij = coeffs->a[i][j] + (i == j ? pert : 0.0);
            quad += aij * xi[i] * xi[j];
          }
        }
        if (quad < coeffs->ellipticity_delta * norm2 - 1e-12) {
          fail("delta |xi|^2 <= a^{ij} xi_i xi_j",
               "sampled form " + std::to_string(quad) + " below delta = " +
                   std::to_string(coeffs->ellipticity_delta));
        }
        if (quad > coeffs->bound_K1 * norm2 + 1e-12) {
          fail("a^{ij} xi_i xi_j <= K1 |xi|^2",
               "sampled form " + std::to_string(quad) + " above K1 = " +
                   std::to_string(coeffs->bound_K1));
        }
      }
    }
    // Stochastic-coefficient gates tied to the noise order.
    double sig_l2 = 0.0, mu_l2 = 0.0, nu_l2 = 0.0;
    for (const auto& s : coeffs->sigma)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sig_l2 += s[i][j] * s[i][j];
    for (const auto& m : coeffs->mu)
      for (int i = 0; i < d; ++i) mu_l2 += m[i] * m[i];
    for (double v : coeffs->nu) nu_l2 += v * v;
    sig_l2 = std::sqrt(sig_l2);
    mu_l2 = std::sqrt(mu_l2);
    nu_l2 = std::sqrt(nu_l2);
    if (sig_l2 > 0.0 && orders.gamma >= 0.5) {
      fail("sigma^{ijk} = 0 required when gamma >= 1/2",
           "second-order stochastic coefficients present at gamma = " +
               std::to_string(orders.gamma));
    }
    if (mu_l2 > 0.0 && orders.gamma >= 0.5 + 0.5 * orders.beta) {
      fail("mu^{ik} = 0 required when gamma >= 1/2 + beta/2",
           "gradient stochastic coefficients present at gamma = " +
               std::to_string(orders.gamma));
    }
    double babs = 0.0;
    for (int i = 0; i < d; ++i) babs += std::abs(coeffs->b[i]);
    const double bound = babs + std::abs(coeffs->c) + sig_l2 + mu_l2 + nu_l2;
    if (bound > coeffs->bound_K1 + 1e-12) {
      fail("|b| + |c| + |sigma|_l2 + |mu|_l2 + |nu|_l2 <= K1",
           "sampled bound " + std::to_string(bound) + " above K1 = " +
               std::to_string(coeffs->bound_K1));
    }
  }

  // Space-time white noise needs a Sobolev exponent with
  // sigma + sigma0 < -1/2 and sigma + 2 > 0, i.e. sigma0 < 3/2; for
  // gamma > 1/2 this is exactly gamma < 1/2 + 3 beta / 4.
  rep.white_noise_gamma_bound = 0.5 + 0.75 * orders.beta;
  rep.white_noise_feasible = rep.sigma0 < 1.5;
  if (white_noise && !rep.white_noise_feasible) {
    fail("sigma + sigma0 < -1/2 and sigma + 2 > 0 admit no sigma",
         "white-noise driving requires gamma < 1/2 + 3 beta/4 = " +
             std::to_string(rep.white_noise_gamma_bound) + ", gamma = " +
             std::to_string(orders.gamma));
  }
  return rep;
}

namespace {

struct MaterializedSources {
  // f[j * modes + i], j = 0..N; g[k][j * modes + i].
  std::vector<Cplx> f;
  std::vector<std::vector<Cplx>> g;
  bool f_zero = true;
  std::vector<char> g_zero;
};

MaterializedSources materialize(const ModelProblem& p) {
  const int N = p.tgrid.steps;
  const std::int64_t modes = p.sgrid.total_points();
  MaterializedSources s;
  s.f.assign(std::size_t(N + 1) * modes, Cplx{});
  if (p.f_time) {
    for (int j = 0; j <= N; ++j) {
      spectral::FourierField fj = p.f_time(p.tgrid.node(j));
      if (!(fj.grid == p.sgrid)) throw std::invalid_argument("solve_model: f_time grid mismatch");
      std::copy(fj.modes.begin(), fj.modes.end(), s.f.begin() + std::size_t(j) * modes);
    }
    s.f_zero = false;
  } else if (!p.f_const.modes.empty()) {
    if (!(p.f_const.grid == p.sgrid)) throw std::invalid_argument("solve_model: f_const grid mismatch");
    bool zero = true;
    for (const auto& v : p.f_const.modes)
      if (v != Cplx{}) { zero = false; break; }
    s.f_zero = zero;
    if (!zero) {
      for (int j = 0; j <= N; ++j)
        std::copy(p.f_const.modes.begin(), p.f_const.modes.end(), s.f.begin() + std::size_t(j) * modes);
    }
  }
  s.g.resize(p.g.size());
  s.g_zero.assign(p.g.size(), 1);
  for (std::size_t k = 0; k < p.g.size(); ++k) {
    if (!(p.g[k].grid == p.sgrid)) throw std::invalid_argument("solve_model: g grid mismatch");
    bool zero = true;
    for (const auto& v : p.g[k].modes)
      if (v != Cplx{}) { zero = false; break; }
    s.g_zero[k] = zero ? 1 : 0;
    s.g[k].assign(std::size_t(N + 1) * modes, Cplx{});
    if (!zero) {
      for (int j = 0; j <= N; ++j)
        std::copy(p.g[k].modes.begin(), p.g[k].modes.end(), s.g[k].begin() + std::size_t(j) * modes);
    }
  }
  return s;
}

SolutionPath solve_materialized(const ModelProblem& p, const MaterializedSources& src,
                                const spectral::KernelTable& table,
                                const noise::NoiseRealization& noise, bool want_parts) {
  const int N = p.tgrid.steps;
  const std::int64_t modes = p.sgrid.total_points();
  const int K = static_cast<int>(src.g.size());
  if (K > 0 && noise.spec.mode_count < K)
    throw std::invalid_argument("solve_model: noise realization has fewer streams than g");

  SolutionPath out;
  out.orders = p.orders;
  out.tgrid = p.tgrid;
  out.sgrid = p.sgrid;
  out.seed = p.noise_spec.seed;
  out.sample_index = noise.sample_index;
  out.u.assign(std::size_t(N + 1) * modes, Cplx{});
  if (want_parts) {
    out.has_parts = true;
    out.du.assign(std::size_t(N + 1) * modes, Cplx{});
    out.su.resize(K);
    for (int k = 0; k < K; ++k) out.su[k] = src.g[k];
  }

  const auto piw = frac::product_integration_weights(p.orders.beta, p.tgrid);
  const double gamma_beta = gamma_fn(p.orders.beta);

  std::vector<Cplx> fseq(N + 1), fsh(N), wseq(N);
  std::vector<double> qker(N + 1, 0.0);
  for (std::int64_t i = 0; i < modes; ++i) {
    const std::int64_t lvl = p.sgrid.mode_level(i);
    const double lambda = p.sgrid.lambda_of_level(lvl);
    const Cplx u0i = p.u0.modes.empty() ? Cplx{} : p.u0.modes[i];

    // homogeneous part
    for (int j = 0; j <= N; ++j)
      out.u[std::size_t(j) * modes + i] = u0i * table.p(j, lvl);

    // deterministic forcing: exact tau^(beta-1) moments x midpoint smooth factor
    if (!src.f_zero) {
      for (int j = 0; j <= N; ++j) fseq[j] = src.f[std::size_t(j) * modes + i];
      // contribution_n = Gamma(beta) sum_m qs[m] (A[m] f_{n-m} + B[m] f_{n-m+1})
      std::vector<double> kerA(N + 1, 0.0), kerB(N + 1, 0.0);
      for (int m = 1; m <= N; ++m) {
        kerA[m] = gamma_beta * table.q_smooth(m, lvl) * piw.A[m];
        kerB[m] = gamma_beta * table.q_smooth(m, lvl) * piw.B[m];
      }
      auto c1 = causal_convolution(kerA, fseq);
      for (int j = 0; j < N; ++j) fsh[j] = fseq[j + 1];
      auto c2 = causal_convolution(kerB, fsh);
      // c2 was built over x[j] = f_{j+1}: sum_m kerB[m] f_{n-m+1} = c2[n].
      for (int n = 1; n <= N; ++n)
        out.u[std::size_t(n) * modes + i] += c1[n] + c2[n];
    }

    // stochastic part, left-endpoint rule
    for (int k = 0; k < K; ++k) {
      if (src.g_zero[k]) continue;
      for (int j = 0; j < N; ++j)
        wseq[j] = src.g[k][std::size_t(j) * modes + i] * noise.dW(k, j);
      for (int m = 1; m <= N; ++m) qker[m] = table.pbg(m, lvl);
      auto c = causal_convolution(qker, wseq);
      for (int n = 1; n <= N; ++n) out.u[std::size_t(n) * modes + i] += c[n];
    }

    if (want_parts) {
      for (int j = 0; j <= N; ++j) {
        out.du[std::size_t(j) * modes + i] =
            -lambda * out.u[std::size_t(j) * modes + i] + src.f[std::size_t(j) * modes + i];
      }
    }
  }
  return out;
}

} // namespace

spectral::FourierField SolutionPath::field_at(int j) const {
  spectral::FourierField f(sgrid);
  const std::int64_t m = mode_count();
  std::copy(u.begin() + std::size_t(j) * m, u.begin() + std::size_t(j + 1) * m,
            f.modes.begin());
  return f;
}

SolutionPath solve_model(const ModelProblem& problem, bool want_parts) {
  auto rep = validate_orders(problem.orders);
  if (!rep.ok)
    throw std::invalid_argument("solve_model: order validation failed: " + rep.summary());
  spectral::KernelTable table(problem.orders, problem.tgrid, problem.sgrid);
  noise::NoiseSpec spec = problem.noise_spec;
  spec.mode_count = std::max<int>(1, static_cast<int>(problem.g.size()));
  auto noise = noise::sample_wiener(spec, problem.tgrid, 0);
  return solve_model(problem, table, noise, want_parts);
}

SolutionPath solve_model(const ModelProblem& problem,
                         const spectral::KernelTable& table,
                         const noise::NoiseRealization& noise, bool want_parts) {
  auto rep = validate_orders(problem.orders);
  if (!rep.ok)
    throw std::invalid_argument("solve_model: order validation failed: " + rep.summary());
  auto src = materialize(problem);
  return solve_materialized(problem, src, table, noise, want_parts);
}

std::complex<double> terminal_mode_value(const ModelProblem& problem,
                                         const spectral::KernelTable& table,
                                         const noise::NoiseRealization& noise,
                                         const std::array<int, 3>& mode) {
  const int N = problem.tgrid.steps;
  const std::int64_t i = problem.sgrid.flatten_modes(mode);
  const std::int64_t lvl = problem.sgrid.mode_level(i);

  Cplx acc = (problem.u0.modes.empty() ? Cplx{} : problem.u0.modes[i]) * table.p(N, lvl);

  if (!problem.f_const.modes.empty() || problem.f_time) {
    const auto piw = frac::product_integration_weights(problem.orders.beta, problem.tgrid);
    const double gb = gamma_fn(problem.orders.beta);
    auto f_at = [&](int j) -> Cplx {
      if (problem.f_time) return problem.f_time(problem.tgrid.node(j)).modes[i];
      return problem.f_const.modes[i];
    };
    for (int m = 1; m <= N; ++m) {
      acc += gb * table.q_smooth(m, lvl) * (piw.A[m] * f_at(N - m) + piw.B[m] * f_at(N - m + 1));
    }
  }
  for (std::size_t k = 0; k < problem.g.size(); ++k) {
    const Cplx gk = problem.g[k].modes[i];
    if (gk == Cplx{}) continue;
    Cplx s{};
    for (int j = 0; j < N; ++j) s += table.pbg(N - j, lvl) * noise.dW(static_cast<int>(k), j);
    acc += gk * s;
  }
  return acc;
}

namespace {

// --- quasilinear assembly -------------------------------------------------

struct GridWork {
  // Real-space samples of the coefficient fields (time-independent).
  std::vector<std::vector<double>> a_grid; // d*d entries, row-major, each size total
  bool a_is_identity = true;
  int d = 1;
  std::int64_t total = 0;
};

GridWork prepare_coefficients(const CoefficientSet& c, const spectral::SpatialGrid& g) {
  GridWork w;
  w.d = c.dim;
  w.total = g.total_points();
  w.a_grid.assign(std::size_t(c.dim) * c.dim, {});
  // identity check
  bool ident = c.a_pert_amp == 0.0;
  for (int i = 0; ident && i < c.dim; ++i)
    for (int j = 0; j < c.dim; ++j)
      if (c.a[i][j] != (i == j ? 1.0 : 0.0)) { ident = false; break; }
  w.a_is_identity = ident;
  if (ident) return w;

  // cos(xi_m . x) on the grid via a single synthesized field
  spectral::FourierField pert(g);
  if (c.a_pert_amp != 0.0) {
    std::array<int, 3> mm = c.a_pert_mode;
    std::array<int, 3> mneg{0, 0, 0};
    for (int q = 0; q < g.dim; ++q) mneg[q] = (mm[q] == -g.points / 2) ? mm[q] : -mm[q];
    pert.at(mm) += 0.5;
    pert.at(mneg) += 0.5;
  }
  auto pert_grid = spectral::to_grid(pert);
  for (int i = 0; i < c.dim; ++i) {
    for (int j = 0; j < c.dim; ++j) {
      auto& entry = w.a_grid[std::size_t(i) * c.dim + j];
      entry.assign(std::size_t(w.total), c.a[i][j]);
      if (i == j && c.a_pert_amp != 0.0) {
        for (std::int64_t q = 0; q < w.total; ++q)
          entry[q] += c.a_pert_amp * pert_grid[q].real();
      }
    }
  }
  return w;
}

std::vector<Cplx> apply_nonlinearity(const Nonlinearity& nl,
                                     const std::vector<Cplx>& u_grid,
                                     const spectral::SpatialGrid& g) {
  std::vector<Cplx> out(u_grid.size(), Cplx{});
  if (!nl.active()) return out;
  switch (nl.kind) {
    case Nonlinearity::Kind::Linear:
      for (std::size_t q = 0; q < u_grid.size(); ++q) out[q] = nl.amplitude * u_grid[q];
      break;
    case Nonlinearity::Kind::Sin:
      for (std::size_t q = 0; q < u_grid.size(); ++q) out[q] = nl.amplitude * std::sin(u_grid[q]);
      break;
    case Nonlinearity::Kind::TruncatedSup: {
      double sup = 0.0;
      for (const auto& v : u_grid) sup = std::max(sup, std::abs(v));
      const double level = nl.amplitude * std::min(sup, nl.cap);
      if (nl.profile) {
        auto prof = spectral::to_grid(*nl.profile);
        for (std::size_t q = 0; q < u_grid.size(); ++q) out[q] = level * prof[q];
      } else {
        for (auto& v : out) v = level;
      }
      break;
    }
    case Nonlinearity::Kind::None:
      break;
  }
  (void)g;
  return out;
}

} // namespace

QuasilinearResult solve_quasilinear(const QuasilinearProblem& p) {
  auto rep = validate_orders(p.orders, &p.coeffs);
  if (!rep.ok)
    throw std::invalid_argument("solve_quasilinear: rejected problem: " + rep.summary());
  const int N = p.tgrid.steps;
  const std::int64_t modes = p.sgrid.total_points();
  const int d = p.coeffs.dim;
  if (d != p.sgrid.dim)
    throw std::invalid_argument("solve_quasilinear: coefficient/grid dimension mismatch");

  const int K = std::max({static_cast<int>(p.g_det.size()), p.coeffs.stream_count(),
                          p.g_nonlin.active() ? 1 : 0});
  spectral::KernelTable table(p.orders, p.tgrid, p.sgrid);
  noise::NoiseSpec spec = p.noise_spec;
  spec.mode_count = std::max(1, K);
  const auto noise = noise::sample_wiener(spec, p.tgrid, 0);

  GridWork gw = prepare_coefficients(p.coeffs, p.sgrid);

  // Base problem for iterate 0: frozen sources from u == 0.
  ModelProblem base;
  base.orders = p.orders;
  base.tgrid = p.tgrid;
  base.sgrid = p.sgrid;
  base.u0 = p.u0;
  base.noise_spec = spec;

  MaterializedSources src;
  src.f.assign(std::size_t(N + 1) * modes, Cplx{});
  src.g.assign(std::size_t(K), std::vector<Cplx>(std::size_t(N + 1) * modes, Cplx{}));
  src.g_zero.assign(std::size_t(K), 0);
  src.f_zero = false;

  // Per-node assembly of the frozen sources from the current iterate.
  const double w1 = std::sqrt(p.sgrid.mode_factor());
  auto assemble_node = [&](const std::vector<Cplx>& u_modes, int j) {
    // mode-space derivative fields
    std::vector<std::vector<Cplx>> d1(d), d2(std::size_t(d) * d);
    for (int ax = 0; ax < d; ++ax) {
      d1[ax].resize(std::size_t(modes));
      for (std::int64_t q = 0; q < modes; ++q) {
        auto m = p.sgrid.unflatten(q);
        d1[ax][q] = u_modes[q] * Cplx(0.0, w1 * m[ax]);
      }
    }
    for (int i1 = 0; i1 < d; ++i1)
      for (int i2 = 0; i2 < d; ++i2) {
        auto& tgt = d2[std::size_t(i1) * d + i2];
        tgt.resize(std::size_t(modes));
        for (std::int64_t q = 0; q < modes; ++q) {
          auto m = p.sgrid.unflatten(q);
          tgt[q] = -u_modes[q] * (w1 * m[i1]) * (w1 * m[i2]);
        }
      }

    // grid-space values where products with x-dependent coefficients occur
    std::vector<Cplx> u_grid = u_modes;
    dft::transform(u_grid, std::vector<int>(std::size_t(p.sgrid.dim), p.sgrid.points), +1);

    std::vector<Cplx> drift_grid(std::size_t(modes), Cplx{});
    std::vector<Cplx> drift_modes(std::size_t(modes), Cplx{});

    if (p.form == EquationForm::NonDivergence) {
      // (a - I) : D^2 u; vanishes identically when a == I (the Laplacian is
      // the frozen principal part).
      if (!gw.a_is_identity) {
        for (int i1 = 0; i1 < d; ++i1)
          for (int i2 = 0; i2 < d; ++i2) {
            const bool diag = i1 == i2;
            std::vector<Cplx> term = d2[std::size_t(i1) * d + i2];
            dft::transform(term, std::vector<int>(std::size_t(p.sgrid.dim), p.sgrid.points), +1);
            for (std::int64_t q = 0; q < modes; ++q) {
              const double aij = gw.a_grid[std::size_t(i1) * d + i2][q];
              drift_grid[q] += (aij - (diag ? 1.0 : 0.0)) * term[q];
            }
          }
      }
      // b^i u_{x_i} + c u (constants: mode space directly)
      for (int ax = 0; ax < d; ++ax) {
        if (p.coeffs.b[ax] == 0.0) continue;
        for (std::int64_t q = 0; q < modes; ++q) drift_modes[q] += p.coeffs.b[ax] * d1[ax][q];
      }
      if (p.coeffs.c != 0.0)
        for (std::int64_t q = 0; q < modes; ++q) drift_modes[q] += p.coeffs.c * u_modes[q];
      // f(u) pointwise
      if (p.f_nonlin.active()) {
        auto fu = apply_nonlinearity(p.f_nonlin, u_grid, p.sgrid);
        for (std::int64_t q = 0; q < modes; ++q) drift_grid[q] += fu[q];
      }
    } else {  // divergence form

      // Divergence form: D_i[a^{ij} u_{x_j} + b^i u + f^i(u)] + c u - Lap u.
      std::vector<Cplx> fu;
      if (p.f_nonlin.active()) fu = apply_nonlinearity(p.f_nonlin, u_grid, p.sgrid);
      for (int i1 = 0; i1 < d; ++i1) {
        // flux_i on the grid
        std::vector<Cplx> flux(std::size_t(modes), Cplx{});
        for (int i2 = 0; i2 < d; ++i2) {
          std::vector<Cplx> dj = d1[i2];
          dft::transform(dj, std::vector<int>(std::size_t(p.sgrid.dim), p.sgrid.points), +1);
          for (std::int64_t q = 0; q < modes; ++q) {
            const double aij = gw.a_is_identity
                                   ? (i1 == i2 ? 1.0 : 0.0)
                                   : gw.a_grid[std::size_t(i1) * d + i2][q];
            flux[q] += aij * dj[q];
          }
        }
        if (p.coeffs.b[i1] != 0.0)
          for (std::int64_t q = 0; q < modes; ++q) flux[q] += p.coeffs.b[i1] * u_grid[q];
        if (!fu.empty())
          for (std::int64_t q = 0; q < modes; ++q) flux[q] += fu[q];
        // to modes, apply i xi_{i1}, accumulate
        dft::transform(flux, std::vector<int>(std::size_t(p.sgrid.dim), p.sgrid.points), -1);
        const double scale = 1.0 / double(modes);
        for (std::int64_t q = 0; q < modes; ++q) {
          auto m = p.sgrid.unflatten(q);
          drift_modes[q] += flux[q] * scale * Cplx(0.0, w1 * m[i1]);
        }
      }
      if (p.coeffs.c != 0.0)
        for (std::int64_t q = 0; q < modes; ++q) drift_modes[q] += p.coeffs.c * u_modes[q];
      // subtract the frozen principal part Lap u
      for (std::int64_t q = 0; q < modes; ++q) {
        drift_modes[q] += u_modes[q] * p.sgrid.lambda_of_level(p.sgrid.mode_level(q));
      }
    }

    // fold grid-space accumulation into modes
    bool grid_used = false;
    for (const auto& v : drift_grid)
      if (v != Cplx{}) { grid_used = true; break; }
    if (grid_used) {
      dft::transform(drift_grid, std::vector<int>(std::size_t(p.sgrid.dim), p.sgrid.points), -1);
      const double scale = 1.0 / double(modes);
      for (std::int64_t q = 0; q < modes; ++q) drift_modes[q] += drift_grid[q] * scale;
    }
    // deterministic forcing
    if (!p.f_det.modes.empty())
      for (std::int64_t q = 0; q < modes; ++q) drift_modes[q] += p.f_det.modes[q];
    std::copy(drift_modes.begin(), drift_modes.end(), src.f.begin() + std::size_t(j) * modes);

    // diffusion sources (constant coefficient families: mode space)
    for (int k = 0; k < K; ++k) {
      auto* tgt = src.g[k].data() + std::size_t(j) * modes;
      std::fill(tgt, tgt + modes, Cplx{});
      if (k < static_cast<int>(p.coeffs.sigma.size())) {
        for (int i1 = 0; i1 < d; ++i1)
          for (int i2 = 0; i2 < d; ++i2) {
            const double s = p.coeffs.sigma[k][i1][i2];
            if (s == 0.0) continue;
            const auto& dd = d2[std::size_t(i1) * d + i2];
            for (std::int64_t q = 0; q < modes; ++q) tgt[q] += s * dd[q];
          }
      }
      if (k < static_cast<int>(p.coeffs.mu.size())) {
        for (int ax = 0; ax < d; ++ax) {
          const double m = p.coeffs.mu[k][ax];
          if (m == 0.0) continue;
          for (std::int64_t q = 0; q < modes; ++q) tgt[q] += m * d1[ax][q];
        }
      }
      if (k < static_cast<int>(p.coeffs.nu.size()) && p.coeffs.nu[k] != 0.0) {
        for (std::int64_t q = 0; q < modes; ++q) tgt[q] += p.coeffs.nu[k] * u_modes[q];
      }
      if (k < static_cast<int>(p.g_det.size())) {
        for (std::int64_t q = 0; q < modes; ++q) tgt[q] += p.g_det[k].modes[q];
      }
      if (k == 0 && p.g_nonlin.active()) {
        auto gu = apply_nonlinearity(p.g_nonlin, u_grid, p.sgrid);
        dft::transform(gu, std::vector<int>(std::size_t(p.sgrid.dim), p.sgrid.points), -1);
        const double scale = 1.0 / double(modes);
        for (std::int64_t q = 0; q < modes; ++q) tgt[q] += gu[q] * scale;
      }
    }
  };

  // Discrete Bochner distance in H^1 between iterates.
  auto bochner_dist = [&](const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
    const double h = p.tgrid.dt();
    const double vol = std::pow(p.sgrid.length, p.sgrid.dim);
    double acc = 0.0;
    for (int j = 0; j <= N; ++j) {
      double ns = 0.0;
      for (std::int64_t q = 0; q < modes; ++q) {
        const double wgt = 1.0 + p.sgrid.lambda_of_level(p.sgrid.mode_level(q));
        ns += wgt * std::norm(a[std::size_t(j) * modes + q] - b[std::size_t(j) * modes + q]);
      }
      acc += (j == 0 || j == N ? 0.5 : 1.0) * h * vol * ns;
    }
    return std::sqrt(acc);
  };

  QuasilinearResult res;
  std::vector<Cplx> u_prev(std::size_t(N + 1) * modes, Cplx{});
  SolutionPath current;
  double norm_scale = 1.0;
  for (int it = 0; it < p.max_iters; ++it) {
    // sources from u_prev (zero path on the first pass)
    std::vector<Cplx> node(static_cast<std::size_t>(modes));
    for (int j = 0; j <= N; ++j) {
      std::copy(u_prev.begin() + std::size_t(j) * modes,
                u_prev.begin() + std::size_t(j + 1) * modes, node.begin());
      assemble_node(node, j);
    }
    current = solve_materialized(base, src, table, noise, /*want_parts=*/true);
    const double dist = bochner_dist(current.u, u_prev);
    res.distances.push_back(dist);
    norm_scale = std::max(bochner_dist(current.u, std::vector<Cplx>(current.u.size(), Cplx{})), 1e-300);
    res.iterations = it + 1;
    if (it > 0 && dist <= p.tol * norm_scale) {
      res.converged = true;
      break;
    }
    u_prev = current.u;
  }
  if (!res.converged) {
    std::ostringstream os;
    os << "solve_quasilinear: no convergence within " << p.max_iters
       << " iterations; distances:";
    for (double t : res.distances) os << " " << t;
    throw std::runtime_error(os.str());
  }
  res.path = std::move(current);
  return res;
}

double residual_distributional(const SolutionPath& path,
                               const std::vector<std::array<int, 3>>& test_modes,
                               double window_lo) {
  if (!path.has_parts)
    throw std::logic_error("residual_distributional: path lacks du/su parts");
  const int N = path.tgrid.steps;
  const double h = path.tgrid.dt();
  const std::int64_t modes = path.sgrid.total_points();
  const int K = static_cast<int>(path.su.size());

  // Replays the noise from the path's seed/sample metadata.
  noise::NoiseSpec spec;
  spec.seed = path.seed;
  spec.mode_count = std::max(1, K);
  const auto noise = noise::sample_wiener(spec, path.tgrid, path.sample_index);

  // Bochner normalization
  double bochner = 0.0;
  const double vol = std::pow(path.sgrid.length, path.sgrid.dim);
  for (int j = 0; j <= N; ++j) {
    double ns = 0.0;
    for (std::int64_t q = 0; q < modes; ++q) ns += std::norm(path.u[std::size_t(j) * modes + q]);
    bochner += (j == 0 || j == N ? 0.5 : 1.0) * h * vol * ns;
  }
  bochner = std::sqrt(bochner);
  if (bochner == 0.0) bochner = 1.0; // zero data: residual reported raw (it is 0)

  const int j_lo = std::max(1, static_cast<int>(std::ceil(window_lo * N)));
  double worst = 0.0;
  frac::TimeGrid tg = path.tgrid;
  for (const auto& mode : test_modes) {
    const std::int64_t i = path.sgrid.flatten_modes(mode);
    // LHS: I^(1-beta)(u - u0)
    std::vector<Cplx> shifted(std::size_t(N + 1));
    const Cplx u0i = path.u[i];
    for (int j = 0; j <= N; ++j) shifted[j] = path.u[std::size_t(j) * modes + i] - u0i;
    frac::ComplexPath lhs =
        frac::fractional_integral(1.0 - path.orders.beta, frac::ComplexPath(tg, shifted));

    // RHS drift: running trapezoid of du
    std::vector<Cplx> drift_int(std::size_t(N + 1), Cplx{});
    for (int j = 1; j <= N; ++j) {
      drift_int[j] = drift_int[j - 1] +
                     0.5 * h * (path.du[std::size_t(j - 1) * modes + i] +
                                path.du[std::size_t(j) * modes + i]);
    }
    // RHS noise: I^(1-gamma) of the discrete stochastic integral
    std::vector<Cplx> stoch(std::size_t(N + 1), Cplx{});
    for (int k = 0; k < K; ++k) {
      Cplx acc{}; // running left-endpoint integral of stream k
      for (int j = 1; j <= N; ++j) {
        acc += path.su[k][std::size_t(j - 1) * modes + i] * noise.dW(k, j - 1);
        stoch[j] += acc;
      }
    }
    frac::ComplexPath snoise =
        frac::fractional_integral(1.0 - path.orders.gamma, frac::ComplexPath(tg, stoch));

    for (int j = j_lo; j <= N; ++j) {
      const Cplx mism = lhs.values[j] - (drift_int[j] + snoise.values[j]);
      worst = std::max(worst, std::abs(mism));
    }
  }
  return worst / bochner;
}

} // namespace fracspde::solver
