#include "langevin/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "langevin/parallel.hpp"
#include "langevin/quadrature.hpp"

namespace langevin {

namespace {

Eigen::VectorXd std_normal_vec(int p, Philox& rng) {
  Eigen::VectorXd z(p);
  for (int i = 0; i < p; ++i) z(i) = rng.normal();
  return z;
}

void require_velocity(const ChainState& s, const char* who) {
  if (!s.v) throw std::invalid_argument(std::string(who) + ": state has no velocity");
}

}  // namespace

ChainState lmc_step_with(const ChainState& s, const PotentialSpec& pot, double h,
                         const Eigen::VectorXd& xi) {
  ChainState out;
  out.theta = s.theta - h * pot.grad(s.theta) + std::sqrt(2.0 * h) * xi;
  out.step_index = s.step_index + 1;
  return out;
}

std::pair<ChainState, StepWitness> rlmc_step_with(const ChainState& s,
                                                  const PotentialSpec& pot, double h,
                                                  double u, const Eigen::VectorXd& xi1,
                                                  const Eigen::VectorXd& xi2) {
  const Eigen::VectorXd g = pot.grad(s.theta);
  const Eigen::VectorXd mid =
      s.theta - h * u * g + std::sqrt(2.0 * h * u) * xi1;
  const Eigen::VectorXd xi = std::sqrt(u) * xi1 + std::sqrt(1.0 - u) * xi2;
  ChainState out;
  out.theta = s.theta - h * pot.grad(mid) + std::sqrt(2.0 * h) * xi;
  out.step_index = s.step_index + 1;
  StepWitness w;
  w.u = u;
  w.noises = {xi1, xi2};
  w.midpoint = mid;
  return {std::move(out), std::move(w)};
}

ChainState klmc_step_with(const ChainState& s, const PotentialSpec& pot, double gamma,
                          double h, const Eigen::VectorXd& zeta_v,
                          const Eigen::VectorXd& zeta_theta) {
  require_velocity(s, "klmc_step");
  const double eta = gamma * h;
  const StepCoefficients c = klmc_coeffs(eta);
  const Eigen::VectorXd g = pot.grad(s.theta);
  ChainState out;
  out.theta = s.theta + (eta / gamma) * (c.alpha * (*s.v) - c.beta * eta * g) + zeta_theta;
  out.v = (1.0 - c.alpha * eta) * (*s.v) - c.alpha * eta * g + zeta_v;
  out.step_index = s.step_index + 1;
  return out;
}

std::pair<ChainState, StepWitness> rklmc_step_with(
    const ChainState& s, const PotentialSpec& pot, double gamma, double h, double u,
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2, const Eigen::VectorXd& z3) {
  require_velocity(s, "rklmc_step");
  const double eta = gamma * h;
  const Eigen::VectorXd g = pot.grad(s.theta);
  const Eigen::VectorXd mid = s.theta + (-std::expm1(-u * eta) / gamma) * (*s.v) -
                              (u * h) * (1.0 - psi(u * eta)) * g + z1;
  const Eigen::VectorXd gm = pot.grad(mid);
  ChainState out;
  out.theta = s.theta + h * psi(eta) * (*s.v) -
              h * (-std::expm1(-eta * (1.0 - u))) * gm + z2;
  out.v = std::exp(-eta) * (*s.v) - eta * std::exp(-eta * (1.0 - u)) * gm + z3;
  out.step_index = s.step_index + 1;
  StepWitness w;
  w.u = u;
  w.noises = {z1, z2, z3};
  w.midpoint = mid;
  return {std::move(out), std::move(w)};
}

ChainState lmc_step(const ChainState& s, const PotentialSpec& pot, double h, Philox& rng) {
  return lmc_step_with(s, pot, h, std_normal_vec(pot.dim, rng));
}

std::pair<ChainState, StepWitness> rlmc_step(const ChainState& s, const PotentialSpec& pot,
                                             double h, Philox& rng) {
  const double u = rng.uniform();
  const Eigen::VectorXd xi1 = std_normal_vec(pot.dim, rng);
  const Eigen::VectorXd xi2 = std_normal_vec(pot.dim, rng);
  return rlmc_step_with(s, pot, h, u, xi1, xi2);
}

ChainState klmc_step(const ChainState& s, const PotentialSpec& pot, double gamma, double h,
                     Philox& rng) {
  const NoiseCovariance cov = klmc_noise_cov(gamma * h, gamma);
  const auto z = sample_noise(cov, pot.dim, rng);
  return klmc_step_with(s, pot, gamma, h, z[0], z[1]);
}

std::pair<ChainState, StepWitness> rklmc_step(const ChainState& s, const PotentialSpec& pot,
                                              double gamma, double h, Philox& rng) {
  const double u = rng.uniform();  // (0,1], matching the covariance domain
  const NoiseCovariance cov = rklmc_noise_cov(gamma * h, gamma, u);
  const auto z = sample_noise(cov, pot.dim, rng);
  return rklmc_step_with(s, pot, gamma, h, u, z[0], z[1], z[2]);
}

ChainState kernel_step(const KernelConfig& k, const ChainState& s, const PotentialSpec& pot,
                       Philox& rng, StepWitness* witness) {
  switch (k.kind) {
    case KernelKind::LMC:
      return lmc_step(s, pot, k.h, rng);
    case KernelKind::RLMC: {
      auto [st, w] = rlmc_step(s, pot, k.h, rng);
      if (witness) *witness = std::move(w);
      return st;
    }
    case KernelKind::KLMC:
      return klmc_step(s, pot, *k.gamma, k.h, rng);
    case KernelKind::RKLMC: {
      auto [st, w] = rklmc_step(s, pot, *k.gamma, k.h, rng);
      if (witness) *witness = std::move(w);
      return st;
    }
  }
  throw std::logic_error("kernel_step: unknown kind");
}

ChainState default_init(const KernelConfig& k, const PotentialSpec& pot, Philox& rng) {
  ChainState s;
  s.theta = pot.minimizer;
  if (k.kinetic()) {
    if (!k.gamma) throw std::invalid_argument("default_init: kinetic kernel needs gamma");
    s.v = std::sqrt(*k.gamma) * std_normal_vec(pot.dim, rng);
  }
  return s;
}

Trajectory run_chain(const KernelConfig& k, const PotentialSpec& pot, ChainState init,
                     std::int64_t n, RecordPolicy record, std::int64_t every_k,
                     Philox& rng) {
  if (n < 0) throw std::invalid_argument("run_chain: n must be >= 0");
  if (k.kinetic() && !k.gamma)
    throw std::invalid_argument("run_chain: kinetic kernel needs gamma");
  if (k.kinetic() && !init.v)
    throw std::invalid_argument("run_chain: kinetic kernel needs a velocity state");
  if (!k.kinetic() && init.v)
    throw std::invalid_argument("run_chain: overdamped kernel got a velocity state");

  Trajectory traj;
  auto maybe_record = [&](const ChainState& s, bool force) {
    const bool want = force || record == RecordPolicy::Full ||
                      record == RecordPolicy::Witnesses ||
                      (record == RecordPolicy::EveryK && every_k > 0 &&
                       s.step_index % every_k == 0);
    if (want) {
      traj.states.push_back(s);
      traj.indices.push_back(s.step_index);
    }
  };

  // Cached covariance for the fixed-step kinetic kernel; RKLMC recomputes
  // per step because u is resampled.
  std::optional<NoiseCovariance> klmc_cov;
  if (k.kind == KernelKind::KLMC) klmc_cov = klmc_noise_cov(*k.gamma * k.h, *k.gamma);

  ChainState s = std::move(init);
  maybe_record(s, n == 0);
  for (std::int64_t i = 0; i < n; ++i) {
    if (k.kind == KernelKind::KLMC) {
      const auto z = sample_noise(*klmc_cov, pot.dim, rng);
      s = klmc_step_with(s, pot, *k.gamma, k.h, z[0], z[1]);
    } else if (record == RecordPolicy::Witnesses) {
      StepWitness w;
      s = kernel_step(k, s, pot, rng, &w);
      traj.witnesses.push_back(std::move(w));
    } else {
      s = kernel_step(k, s, pot, rng, nullptr);
    }
    maybe_record(s, i == n - 1);
  }
  return traj;
}

Eigen::MatrixXd run_replicas(const KernelConfig& k, const PotentialSpec& pot,
                             std::int64_t n, int replicas, std::uint64_t seed,
                             int threads,
                             const std::function<ChainState(Philox&)>& init_sampler) {
  Eigen::MatrixXd finals(replicas, pot.dim);
  parallel_chunks(replicas, threads, [&](int begin, int end, int) {
    for (int r = begin; r < end; ++r) {
      Philox rng = replica_rng(seed, static_cast<std::uint64_t>(r));
      ChainState init = init_sampler ? init_sampler(rng) : default_init(k, pot, rng);
      Trajectory t = run_chain(k, pot, std::move(init), n, RecordPolicy::FinalOnly, 0, rng);
      finals.row(r) = t.states.back().theta.transpose();
    }
  });
  return finals;
}

// --- fine-grid machinery ---

FineGrid uniform_grid(double h, int substeps) {
  if (substeps < 1) throw std::invalid_argument("uniform_grid: substeps must be >= 1");
  FineGrid g;
  g.t.reserve(substeps);
  for (int i = 1; i <= substeps; ++i) g.t.push_back(h * static_cast<double>(i) / substeps);
  g.t.back() = h;
  return g;
}

FineGrid grid_with_splits(double h, int substeps, const std::vector<double>& splits) {
  FineGrid g = uniform_grid(h, substeps);
  for (double s : splits) {
    if (s <= 0.0 || s >= h) continue;
    g.t.push_back(s);
  }
  std::sort(g.t.begin(), g.t.end());
  const double tol = 1e-12 * h;
  g.t.erase(std::unique(g.t.begin(), g.t.end(),
                        [tol](double a, double b) { return std::abs(a - b) <= tol; }),
            g.t.end());
  g.t.back() = h;
  return g;
}

FineNoise sample_fine_noise(const FineGrid& grid, double gamma, int p, Philox& rng) {
  FineNoise noise;
  const std::size_t n = grid.t.size();
  noise.zv.reserve(n);
  noise.zth.reserve(n);
  std::map<double, NoiseCovariance> cache;  // keyed on interval length
  double prev = 0.0;
  for (double t : grid.t) {
    const double dt = t - prev;
    prev = t;
    auto it = cache.find(dt);
    if (it == cache.end()) it = cache.emplace(dt, klmc_noise_cov(gamma * dt, gamma)).first;
    auto z = sample_noise(it->second, p, rng);
    noise.zv.push_back(std::move(z[0]));
    noise.zth.push_back(std::move(z[1]));
  }
  return noise;
}

FinePath integrate_kinetic_fine(const Eigen::VectorXd& theta0, const Eigen::VectorXd& v0,
                                const PotentialSpec& pot, double gamma,
                                const FineGrid& grid, const FineNoise& noise) {
  if (noise.zv.size() != grid.t.size())
    throw std::invalid_argument("integrate_kinetic_fine: noise/grid size mismatch");
  FinePath path;
  path.theta.reserve(grid.t.size() + 1);
  path.v.reserve(grid.t.size() + 1);
  path.theta.push_back(theta0);
  path.v.push_back(v0);
  Eigen::VectorXd th = theta0, v = v0;
  double prev = 0.0;
  for (std::size_t j = 0; j < grid.t.size(); ++j) {
    const double dt = grid.t[j] - prev;
    prev = grid.t[j];
    const double eta = gamma * dt;
    const StepCoefficients c = klmc_coeffs(eta);
    // Predictor freezes the gradient at the left endpoint; the corrector
    // re-freezes it at the interval midpoint, making the substep map
    // second-order accurate in dt.
    const Eigen::VectorXd g0 = pot.grad(th);
    const Eigen::VectorXd th_pred =
        th + (eta / gamma) * (c.alpha * v - c.beta * eta * g0) + noise.zth[j];
    const Eigen::VectorXd g = pot.grad(0.5 * (th + th_pred));
    const Eigen::VectorXd th_next =
        th + (eta / gamma) * (c.alpha * v - c.beta * eta * g) + noise.zth[j];
    v = (1.0 - c.alpha * eta) * v - c.alpha * eta * g + noise.zv[j];
    th = th_next;
    path.theta.push_back(th);
    path.v.push_back(v);
  }
  return path;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> aggregate_noise(const FineGrid& grid,
                                                            const FineNoise& noise,
                                                            double gamma, int idx_end) {
  const double t_end = grid.t[idx_end];
  const int p = static_cast<int>(noise.zv[0].size());
  Eigen::VectorXd zv = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd zth = Eigen::VectorXd::Zero(p);
  for (int j = 0; j <= idx_end; ++j) {
    const double w = std::exp(-gamma * (t_end - grid.t[j]));
    zv += w * noise.zv[j];
    zth += noise.zth[j] + ((1.0 - w) / gamma) * noise.zv[j];
  }
  return {std::move(zv), std::move(zth)};
}

std::vector<Eigen::VectorXd> aggregate_position_noise_many(
    const FineGrid& grid, const FineNoise& noise, double gamma,
    const std::vector<int>& end_indices) {
  const int p = static_cast<int>(noise.zv[0].size());
  std::vector<int> order(end_indices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return end_indices[a] < end_indices[b]; });

  std::vector<Eigen::VectorXd> out(end_indices.size());
  Eigen::VectorXd sum_zth = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd sum_zv = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd sum_exp_zv = Eigen::VectorXd::Zero(p);  // sum e^{gamma t_j} zv_j
  int j = 0;
  for (int oi : order) {
    const int idx = end_indices[oi];
    for (; j <= idx; ++j) {
      sum_zth += noise.zth[j];
      sum_zv += noise.zv[j];
      sum_exp_zv += std::exp(gamma * grid.t[j]) * noise.zv[j];
    }
    const double t_end = grid.t[idx];
    out[oi] = sum_zth + (1.0 / gamma) * sum_zv -
              (std::exp(-gamma * t_end) / gamma) * sum_exp_zv;
  }
  return out;
}

ChainState reference_kinetic_path(const ChainState& init, const PotentialSpec& pot,
                                  double gamma, double h, int substeps,
                                  const FineNoise& shared_noise) {
  require_velocity(init, "reference_kinetic_path");
  const FineGrid grid = uniform_grid(h, substeps);
  if (shared_noise.zv.size() != grid.t.size())
    throw std::invalid_argument("reference_kinetic_path: noise grid mismatch");
  FinePath path = integrate_kinetic_fine(init.theta, *init.v, pot, gamma, grid, shared_noise);
  ChainState out;
  out.theta = path.theta.back();
  out.v = path.v.back();
  out.step_index = init.step_index;
  return out;
}

// --- one-step error report ---

bool OneStepReport::all_bounds_hold() const {
  for (const auto& r : rows)
    if (r.valid && r.measured > r.bound) return false;
  return true;
}

OneStepReport one_step_error_report(const PotentialSpec& pot,
                                    const std::function<ChainState(Philox&)>& init_sampler,
                                    double gamma, double h, int replicas, int substeps,
                                    std::uint64_t seed, int threads) {
  const double eta = gamma * h;
  const int p = pot.dim;
  const auto& gl = gauss_legendre_64();
  const int nq = static_cast<int>(gl.nodes.size());
  std::vector<double> qu(nq), qw(nq);  // nodes/weights mapped to (0,1)
  for (int i = 0; i < nq; ++i) {
    qu[i] = 0.5 * (gl.nodes[i] + 1.0);
    qw[i] = 0.5 * gl.weights[i];
  }
  const bool exact_mean = pot.hessian.has_value();
  std::vector<double> base_splits;
  if (!exact_mean)
    for (int i = 0; i < nq; ++i) base_splits.push_back(qu[i] * h);

  // Midpoint-fraction average of the randomized update, conditional on the
  // Brownian path. The gradient argument splits into a smooth part and the
  // position noise zeta_theta(u h); with a constant Hessian the average of
  // the noisy part reduces, by parts, to exact per-interval integrals of the
  // sampled noise (zeta_theta(u h) is C^1 in u with derivative h zeta_v(u h),
  // so naive quadrature over u would be limited by Brownian roughness).
  const double emh = std::exp(-eta);
  auto c_fn = [eta](double u) { return -std::expm1(-eta * (1.0 - u)); };
  auto ct_fn = [eta](double u) { return std::exp(-eta * (1.0 - u)); };
  auto a_fn = [eta, gamma](double u) { return -std::expm1(-u * eta) / gamma; };
  auto b_fn = [eta, h](double u) { return -u * h * (1.0 - psi(u * eta)); };
  auto C_fn = [eta, emh](double u) { return u - emh * std::expm1(eta * u) / eta; };
  auto Ct_fn = [eta, emh](double u) { return emh * std::expm1(eta * u) / eta; };
  double I_c = 0, I_ca = 0, I_cb = 0, I_tc = 0, I_tca = 0, I_tcb = 0;
  for (int i = 0; i < nq; ++i) {
    const double u = qu[i], w = qw[i];
    I_c += w * c_fn(u);
    I_ca += w * c_fn(u) * a_fn(u);
    I_cb += w * c_fn(u) * b_fn(u);
    I_tc += w * ct_fn(u);
    I_tca += w * ct_fn(u) * a_fn(u);
    I_tcb += w * ct_fn(u) * b_fn(u);
  }
  const double C1 = C_fn(1.0), Ct1 = Ct_fn(1.0);

  struct Acc {
    double v0 = 0, g0 = 0;
    double klmc_v = 0, klmc_th = 0;
    double mid = 0, mean_th = 0, fluct_th = 0, mean_v = 0, fluct_v = 0;
    void add(const Acc& o) {
      v0 += o.v0; g0 += o.g0; klmc_v += o.klmc_v; klmc_th += o.klmc_th;
      mid += o.mid; mean_th += o.mean_th; fluct_th += o.fluct_th;
      mean_v += o.mean_v; fluct_v += o.fluct_v;
    }
  };

  const int nthreads = std::max(1, threads);
  std::vector<Acc> partial(nthreads);

  parallel_chunks(replicas, nthreads, [&](int begin, int end, int chunk) {
    Acc acc;
    const StepCoefficients cc = klmc_coeffs(eta);
    for (int r = begin; r < end; ++r) {
      Philox rng = replica_rng(seed, static_cast<std::uint64_t>(r));
      ChainState s0 = init_sampler(rng);
      const Eigen::VectorXd g0 = pot.grad(s0.theta);
      const double U = rng.uniform();

      std::vector<double> splits = base_splits;
      splits.push_back(U * h);
      const FineGrid grid = grid_with_splits(h, substeps, splits);
      const FineNoise noise = sample_fine_noise(grid, gamma, p, rng);

      auto index_of = [&](double t) {
        auto it = std::lower_bound(grid.t.begin(), grid.t.end(), t - 1e-12 * h);
        return static_cast<int>(it - grid.t.begin());
      };
      const int idx_h = static_cast<int>(grid.t.size()) - 1;
      const int idx_U = index_of(U * h);

      // Reference path and coarse noise reconstructed from the same path.
      const FinePath ref = integrate_kinetic_fine(s0.theta, *s0.v, pot, gamma, grid, noise);
      auto [zeta_v, zeta_th] = aggregate_noise(grid, noise, gamma, idx_h);

      // KLMC one step with exactly-coupled noise.
      const ChainState s1 = klmc_step_with(s0, pot, gamma, h, zeta_v, zeta_th);
      acc.klmc_v += (*s1.v - ref.v[idx_h + 1]).squaredNorm();
      acc.klmc_th += (s1.theta - ref.theta[idx_h + 1]).squaredNorm();

      // RKLMC at the drawn U.
      const auto [zeta_v_U, zeta_th_U] = aggregate_noise(grid, noise, gamma, idx_U);
      auto [r1, w1] = rklmc_step_with(s0, pot, gamma, h, U, zeta_th_U, zeta_th, zeta_v);
      acc.mid += (*w1.midpoint - ref.theta[idx_U + 1]).squaredNorm();

      Eigen::VectorXd gsum_th(p), gsum_v(p);
      if (exact_mean) {
        // J = int_0^1 c(u) zeta_theta(u h) du = C(1) zeta_theta(h)
        //     - sum_j [ zeta_v(t_j) E_j + C(mid_j) zth_j ],
        // E_j = int over interval j of C(s/h) e^{-gamma (s - t_j)} ds.
        Eigen::VectorXd J_c = C1 * zeta_th;
        Eigen::VectorXd J_tc = Ct1 * zeta_th;
        Eigen::VectorXd vpref = Eigen::VectorXd::Zero(p);  // zeta_v at t_j
        double prev = 0.0;
        for (std::size_t j = 0; j < grid.t.size(); ++j) {
          const double dt = grid.t[j] - prev;
          const double mid = prev + 0.5 * dt;
          // two-point Gauss rule on the interval
          const double off = 0.5 * dt / std::sqrt(3.0);
          double Ec = 0.0, Etc = 0.0;
          for (double s : {mid - off, mid + off}) {
            const double w = 0.5 * dt * std::exp(-gamma * (s - prev));
            Ec += w * C_fn(s / h);
            Etc += w * Ct_fn(s / h);
          }
          J_c -= Ec * vpref + C_fn(mid / h) * noise.zth[j];
          J_tc -= Etc * vpref + Ct_fn(mid / h) * noise.zth[j];
          vpref = std::exp(-gamma * dt) * vpref + noise.zv[j];
          prev = grid.t[j];
        }
        const Eigen::MatrixXd& A = *pot.hessian;
        const Eigen::VectorXd Av = A * (*s0.v);
        const Eigen::VectorXd Ag = A * g0;
        gsum_th = I_c * g0 + I_ca * Av + I_cb * Ag + A * J_c;
        gsum_v = I_tc * g0 + I_tca * Av + I_tcb * Ag + A * J_tc;
      } else {
        // General potentials: Gauss-Legendre average over u with the exact
        // midpoint noise at each node (limited by Brownian roughness).
        std::vector<int> q_idx(nq);
        for (int i = 0; i < nq; ++i) q_idx[i] = index_of(qu[i] * h);
        const auto z1_all = aggregate_position_noise_many(grid, noise, gamma, q_idx);
        gsum_th.setZero();
        gsum_v.setZero();
        for (int i = 0; i < nq; ++i) {
          const double u = qu[i];
          const Eigen::VectorXd mid_u =
              s0.theta + a_fn(u) * (*s0.v) + b_fn(u) * g0 + z1_all[i];
          const Eigen::VectorXd gm = pot.grad(mid_u);
          gsum_th += qw[i] * c_fn(u) * gm;
          gsum_v += qw[i] * ct_fn(u) * gm;
        }
      }
      const Eigen::VectorXd mean_th =
          s0.theta + h * psi(eta) * (*s0.v) - h * gsum_th + zeta_th;
      const Eigen::VectorXd mean_v = emh * (*s0.v) - eta * gsum_v + zeta_v;

      acc.mean_th += (mean_th - ref.theta[idx_h + 1]).squaredNorm();
      acc.fluct_th += (r1.theta - mean_th).squaredNorm();
      acc.mean_v += (mean_v - ref.v[idx_h + 1]).squaredNorm();
      acc.fluct_v += (*r1.v - mean_v).squaredNorm();

      acc.v0 += s0.v->squaredNorm();
      acc.g0 += g0.squaredNorm();
    }
    partial[chunk].add(acc);
  });

  Acc tot;
  for (const auto& a : partial) tot.add(a);
  const double R = static_cast<double>(replicas);
  auto l2 = [R](double ssq) { return std::sqrt(ssq / R); };

  const double vn = l2(tot.v0);
  const double gn = l2(tot.g0);
  const double Mg = pot.M / gamma;
  const double ex = std::exp(0.5 * Mg * eta * eta);
  const double rootgpe = std::sqrt(gamma * p * eta);
  const bool cor_valid = (gamma >= 2.0 * pot.M) && (eta <= 0.2);

  OneStepReport rep;
  rep.gamma = gamma;
  rep.eta = eta;
  rep.p = p;
  rep.replicas = replicas;
  rep.substeps = substeps;
  rep.v_norm = vn;
  rep.g_norm = gn;
  rep.rows = {
      {"klmc_velocity", l2(tot.klmc_v),
       (1.0 / 6.0) * (2.0 * rootgpe + 3.0 * vn + eta * gn) * Mg * eta * eta * ex, true},
      {"klmc_position", gamma * l2(tot.klmc_th),
       (1.0 / 6.0) * (0.6 * rootgpe + vn + 0.25 * eta * gn) * Mg * eta * eta * eta * ex,
       true},
      {"rklmc_midpoint", l2(tot.mid),
       (Mg * eta * eta * eta * ex / gamma) *
           (0.065 * eta * gn + vn / 6.0 + std::sqrt(eta * gamma * p / 54.0)),
       true},
      {"rklmc_mean_position", gamma * l2(tot.mean_th),
       Mg * Mg * std::pow(eta, 5) * (0.038 * eta * gn + 0.098 * vn + 0.084 * rootgpe),
       cor_valid},
      {"rklmc_fluct_position", gamma * l2(tot.fluct_th),
       eta * eta * (0.578 * gn + 0.02 * vn + 0.005 * rootgpe), cor_valid},
      {"rklmc_mean_velocity", l2(tot.mean_v),
       Mg * Mg * std::pow(eta, 4) * (0.066 * eta * gn + 0.168 * vn + 0.137 * rootgpe),
       cor_valid},
      {"rklmc_fluct_velocity", l2(tot.fluct_v),
       eta * eta * (0.591 * gn + 0.164 * vn + 0.082 * rootgpe), cor_valid},
  };
  return rep;
}

std::function<ChainState(Philox&)> gaussian_stationary_init(const Eigen::MatrixXd& precision,
                                                            const Eigen::VectorXd& mean,
                                                            double gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(precision);
  const Eigen::MatrixXd V = es.eigenvectors();
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().array().sqrt().inverse();
  const int p = static_cast<int>(mean.size());
  return [V, inv_sqrt, mean, gamma, p](Philox& rng) {
    Eigen::VectorXd z(p), zv(p);
    for (int i = 0; i < p; ++i) z(i) = rng.normal();
    for (int i = 0; i < p; ++i) zv(i) = rng.normal();
    ChainState s;
    s.theta = mean + V * (inv_sqrt.asDiagonal() * z);
    s.v = std::sqrt(gamma) * zv;
    return s;
  };
}

}  // namespace langevin
