// Copyright 2026 The qdecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdecon/protocol.hpp"

#include <chrono>
#include <cmath>

#include "qdecon/errors.hpp"
#include "qdecon/random.hpp"

namespace qdecon {

namespace {

Matrix kron_matrices(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::int64_t int_power(std::int64_t base, int n) {
  std::int64_t out = 1;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

/// Dimension above which the decoupling residual switches to the projected
/// low-rank eigenvalue route instead of a dense difference.
constexpr std::int64_t kDenseEpsLimit = 512;

/// Columns sqrt(lambda) * v of the grouped n-fold power of rho_re, so that
/// the power equals (factor)(factor)^dag without ever forming it densely.
Matrix re_power_factor(const DensityOperator& rho_re, int n) {
  EigResult eig = eig_hermitian(rho_re.op());
  const double cutoff = kSupportCutoff * eig.eigenvalues.maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cutoff) kept.push_back(i);
  }
  const std::int64_t r = static_cast<std::int64_t>(kept.size());
  const std::int64_t dre = rho_re.dim();
  const std::int64_t d_r = rho_re.layout().factors()[0].dim;
  const std::int64_t d_e = rho_re.layout().factors()[1].dim;

  // Copy-major -> grouped permutation for the two-factor pair.
  std::vector<Factor> cm_factors;
  for (int c = 0; c < n; ++c) {
    cm_factors.push_back(Factor{"r" + std::to_string(c), d_r});
    cm_factors.push_back(Factor{"e" + std::to_string(c), d_e});
  }
  SubsystemLayout cm(cm_factors);
  std::vector<std::string> grouped_order;
  for (int c = 0; c < n; ++c) grouped_order.push_back("r" + std::to_string(c));
  for (int c = 0; c < n; ++c) grouped_order.push_back("e" + std::to_string(c));
  const auto map = permutation_index_map(cm, grouped_order);

  const std::int64_t dn = int_power(dre, n);
  const std::int64_t cols = int_power(r, n);
  Matrix out(dn, cols);
  std::vector<std::int64_t> radix(n, r);
  for (std::int64_t c = 0; c < cols; ++c) {
    const auto digits = decompose_index(c, radix);
    Vector w = Vector::Ones(1);
    double lam = 1.0;
    for (int copy = 0; copy < n; ++copy) {
      const Eigen::Index j = kept[digits[copy]];
      lam *= eig.eigenvalues(j);
      Vector next(w.size() * dre);
      for (std::int64_t i = 0; i < w.size(); ++i) {
        next.segment(i * dre, dre) = w(i) * eig.eigenvectors.col(j);
      }
      w = std::move(next);
    }
    const double weight = std::sqrt(lam);
    for (std::int64_t i = 0; i < dn; ++i) out(map[i], c) = weight * w(i);
  }
  return out;
}

/// || K^dag K - L L^dag ||_1 via the joint column space: both terms live in
/// range([K^dag | L]), so the difference is diagonalized there exactly.
double psd_diff_trace_norm_lowrank(const Matrix& k, const Matrix& l) {
  const std::int64_t d = k.cols();
  Matrix basis(d, k.rows() + l.cols());
  basis.leftCols(k.rows()) = k.adjoint();
  basis.rightCols(l.cols()) = l;
  const std::int64_t r = std::min<std::int64_t>(d, basis.cols());
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix thin_q = qr.householderQ() * Matrix::Identity(d, r);
  const Matrix p1 = k * thin_q;
  const Matrix p2 = thin_q.adjoint() * l;
  Matrix small = p1.adjoint() * p1 - p2 * p2.adjoint();
  small = (small + small.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(small, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

std::string fresh_label(const SubsystemLayout& layout, const std::string& base) {
  if (!layout.has_label(base)) return base;
  for (int i = 0;; ++i) {
    const std::string candidate = base + std::to_string(i);
    if (!layout.has_label(candidate)) return candidate;
  }
}

std::int64_t pow2_checked(int bits, const char* what) {
  if (bits < 0 || bits > 40) {
    throw ConfigError(std::string(what) + ": " + std::to_string(bits) +
                      " bits out of range");
  }
  return std::int64_t(1) << bits;
}

}  // namespace

SizeChoice choose_sizes(int n, double delta, std::int64_t dim_a,
                        std::int64_t dim_b, std::int64_t dim_r,
                        std::int64_t dim_e, double h_alphatilde_a_given_b,
                        double h_alpha_a_given_br) {
  SizeChoice choice;
  const double log_n1 = std::log2(n + 1.0);
  const double upper_f = n * std::log2(static_cast<double>(dim_a));

  choice.log2_f_raw =
      std::ceil(n * h_alphatilde_a_given_b +
                static_cast<double>(dim_r * dim_e) * log_n1 + n * delta / 2.0);
  if (choice.log2_f_raw >= upper_f) {
    choice.dim_f = int_power(dim_a, n);
    choice.log2_f = upper_f;
    choice.clamped_f = choice.log2_f_raw > upper_f;
  } else if (choice.log2_f_raw < 0.0) {
    choice.dim_f = 1;
    choice.log2_f = 0.0;
    choice.clamped_f = true;
  } else {
    choice.dim_f = static_cast<std::int64_t>(
        std::llround(std::exp2(choice.log2_f_raw)));
    choice.log2_f = std::log2(static_cast<double>(choice.dim_f));
  }

  choice.log2_m_raw =
      choice.log2_f +
      std::ceil(-n * h_alpha_a_given_br +
                static_cast<double>(dim_b * dim_r) * log_n1 + n * delta / 2.0);
  const double upper_m = 2.0 * choice.log2_f;
  if (choice.log2_m_raw >= upper_m) {
    choice.num_unitaries = choice.dim_f * choice.dim_f;
    choice.log2_m = upper_m;
    choice.clamped_m = choice.log2_m_raw > upper_m;
  } else if (choice.log2_m_raw < 0.0) {
    choice.num_unitaries = 1;
    choice.log2_m = 0.0;
    choice.clamped_m = true;
  } else {
    choice.num_unitaries = std::min<std::int64_t>(
        choice.dim_f * choice.dim_f,
        static_cast<std::int64_t>(
            std::ceil(std::exp2(choice.log2_m_raw) - 1e-9)));
    choice.log2_m = std::log2(static_cast<double>(choice.num_unitaries));
  }
  return choice;
}

SizeChoice choose_sizes(const ProtocolConfig& config) {
  const auto& factors = config.rho.layout().factors();
  if (factors.size() != 3) {
    throw LayoutError("choose_sizes expects a tripartite [A, B, R] layout");
  }
  EntropyParams tilted = config.entropy;
  tilted.alpha = dual_alpha(config.alpha);
  const double h_at = renyi_conditional(config.rho, {factors[0].label},
                                        {factors[1].label}, tilted);
  EntropyParams straight = config.entropy;
  straight.alpha = config.alpha;
  const double h_a =
      renyi_conditional(config.rho, {factors[0].label},
                        {factors[1].label, factors[2].label}, straight);

  EigResult eig = eig_hermitian(config.rho.op());
  const double cutoff = kSupportCutoff * eig.eigenvalues.maxCoeff();
  std::int64_t rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cutoff) ++rank;
  }
  return choose_sizes(config.n, config.delta, factors[0].dim, factors[1].dim,
                      factors[2].dim, rank, h_at, h_a);
}

void size_formulas_real(int n, double delta, std::int64_t dim_b,
                        std::int64_t dim_r, std::int64_t dim_e,
                        double h_alphatilde_a_given_b,
                        double h_alpha_a_given_br, double* log2_f,
                        double* log2_m) {
  const double log_n1 = std::log2(n + 1.0);
  *log2_f = n * h_alphatilde_a_given_b +
            static_cast<double>(dim_r * dim_e) * log_n1 + n * delta / 2.0;
  *log2_m = *log2_f - n * h_alpha_a_given_br +
            static_cast<double>(dim_b * dim_r) * log_n1 + n * delta / 2.0;
}

namespace {

/// || upsilon - tau (x) upsilon^{BR} ||_1; the single code path behind both
/// protocol error measurements, so they agree bit for bit.
double product_distance_impl(const DensityOperator& upsilon,
                             const Operator& tau, Operator* ups_br_out) {
  std::vector<std::string> br_labels;
  for (const auto& f : upsilon.layout().factors()) {
    if (!tau.layout.has_label(f.label)) br_labels.push_back(f.label);
  }
  Operator ups_br = partial_trace(upsilon.op(), br_labels);

  Operator product = kron(tau, ups_br);
  if (!(product.layout == upsilon.layout())) {
    throw ShapeError("erasure_error: tau must cover the leading factors of "
                     "upsilon's layout");
  }
  const double distance = trace_norm(upsilon.mat() - product.mat);
  if (ups_br_out != nullptr) *ups_br_out = std::move(ups_br);
  return distance;
}

}  // namespace

ErasureReport erasure_error(const DensityOperator& upsilon, const Operator& tau,
                            const Operator& reference_br) {
  Operator ups_br;
  ErasureReport report;
  report.product_distance = product_distance_impl(upsilon, tau, &ups_br);
  if (reference_br.mat.rows() != ups_br.mat.rows()) {
    throw ShapeError("erasure_error: reference dimension mismatch");
  }
  report.marginal_distance = trace_norm(ups_br.mat - reference_br.mat);
  return report;
}

double deconstruction_error(const DensityOperator& upsilon,
                            const PartialIsometry& iso) {
  return product_distance_impl(upsilon, iso.embedded_mixed(), nullptr);
}

ProtocolRun run_protocol(const ProtocolConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  const auto& factors = config.rho.layout().factors();
  if (factors.size() != 3) {
    throw LayoutError("run_protocol expects a tripartite [A, B, R] layout");
  }
  if (!(config.alpha > 1.0 && config.alpha <= 2.0)) {
    throw ConfigError("run_protocol: alpha must lie in (1, 2]");
  }
  if (config.n < 1) throw ConfigError("run_protocol: n must be >= 1");
  if (config.num_u_candidates < 1) {
    throw ConfigError("run_protocol: need at least one U candidate");
  }

  const std::string label_a = factors[0].label;
  const std::string label_b = factors[1].label;
  const std::string label_r = factors[2].label;
  const std::int64_t dim_a = factors[0].dim;
  const std::int64_t dim_b = factors[1].dim;
  const std::int64_t dim_r = factors[2].dim;
  const int n = config.n;

  // Purification and single-copy entropies.
  const std::string label_e = fresh_label(config.rho.layout(), "E");
  const PureState psi = purify(config.rho, label_e);
  const std::int64_t dim_e = psi.layout().dim_of(label_e);

  EntropyParams tilted = config.entropy;
  tilted.alpha = dual_alpha(config.alpha);
  const double h_at_ab =
      renyi_conditional(config.rho, {label_a}, {label_b}, tilted);
  EntropyParams straight = config.entropy;
  straight.alpha = config.alpha;
  const double h_a_abr =
      renyi_conditional(config.rho, {label_a}, {label_b, label_r}, straight);

  // Sizes: explicit bits or the auto formulas.
  SizeChoice sizes;
  if (config.log2_f.has_value() || config.log2_m.has_value()) {
    if (!config.log2_f.has_value() || !config.log2_m.has_value()) {
      throw ConfigError("explicit sizing requires both log2_f and log2_m");
    }
    sizes.dim_f = pow2_checked(*config.log2_f, "log2_f");
    sizes.num_unitaries = pow2_checked(*config.log2_m, "log2_m");
    sizes.log2_f = *config.log2_f;
    sizes.log2_m = *config.log2_m;
    sizes.log2_f_raw = sizes.log2_f;
    sizes.log2_m_raw = sizes.log2_m;
    if (sizes.dim_f > int_power(dim_a, n)) {
      throw ConfigError("log2_f exceeds n log2 |A|");
    }
    if (sizes.num_unitaries > sizes.dim_f * sizes.dim_f) {
      throw ConfigError("log2_m exceeds 2 log2_f");
    }
  } else {
    sizes = choose_sizes(n, config.delta, dim_a, dim_b, dim_r, dim_e, h_at_ab,
                         h_a_abr);
  }
  const std::int64_t dim_f = sizes.dim_f;
  const std::int64_t num_unitaries = sizes.num_unitaries;

  // Grouped n-copy objects.
  const PureState psi_n = n_copies_grouped(psi, n);
  const DensityOperator rho_n = n_copies_grouped(config.rho, n);
  const DensityOperator rho_br = DensityOperator::unchecked(
      partial_trace(config.rho.op(), {label_b, label_r}));
  const DensityOperator rho_br_n = n_copies_grouped(rho_br, n);
  const DensityOperator rho_re = marginal(psi, {label_r, label_e});

  const std::string ga = psi_n.layout().factors()[0].label;
  const std::string gb = psi_n.layout().factors()[1].label;
  const std::string gr = psi_n.layout().factors()[2].label;
  const std::int64_t dim_an = psi_n.layout().factors()[0].dim;
  const std::int64_t dim_bn = psi_n.layout().factors()[1].dim;
  const std::int64_t dim_ren =
      psi_n.layout().factors()[2].dim * psi_n.layout().factors()[3].dim;

  const std::string label_f = fresh_label(psi_n.layout(), "F");
  const PartialIsometry iso =
      make_partial_isometry(SubsystemLayout::single(ga, dim_an),
                            SubsystemLayout::single(label_f, dim_f),
                            derive_seed(config.seed, {0}));
  const HwSet hw = heisenberg_weyl(dim_f);

  // Reference objects for the residuals.
  const bool dense_eps = dim_ren <= kDenseEpsLimit;
  Matrix re_ref_dense;
  Matrix re_factor;
  if (dense_eps) {
    re_ref_dense = n_copies_grouped(rho_re, n).mat();
  } else {
    re_factor = re_power_factor(rho_re, n);
  }
  const Matrix pi_f = Matrix::Identity(dim_f, dim_f) / double(dim_f);
  const Matrix theta_ref = kron_matrices(pi_f, rho_br_n.mat());
  SubsystemLayout theta_layout =
      SubsystemLayout::single(label_f, dim_f)
          .concat(SubsystemLayout({psi_n.layout().factors()[1],
                                   psi_n.layout().factors()[2]}));

  const double scale = double(dim_an) / double(dim_f);
  const double sqrt_scale = std::sqrt(scale);

  ProtocolRun run;
  run.sizes = sizes;

  // Candidate search: the proof guarantees a good U exists; sample a few and
  // keep the one minimizing max(eps, theta), ties to the lowest index.
  std::vector<Matrix> candidates;
  candidates.reserve(config.num_u_candidates);
  int best = -1;
  double best_score = 0.0;
  for (int k = 0; k < config.num_u_candidates; ++k) {
    const Matrix u =
        haar_unitary_matrix(dim_an, derive_seed(config.seed, {1, std::uint64_t(k)}));
    candidates.push_back(u);
    const Matrix wu = iso.w() * u;

    Vector phi_f = apply_on_leading(wu, psi_n.amplitudes());
    phi_f *= sqrt_scale;
    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>;
    Eigen::Map<const RowMajor> k_map(phi_f.data(), dim_f * dim_bn, dim_ren);
    // The kept factors index columns here, so the R^nE^n marginal of phi is
    // k^T conj(k); conjugating once lets both residual paths use k^dag k.
    const Matrix k_mat = k_map.conjugate();
    double eps_k;
    if (dense_eps) {
      eps_k = trace_norm(Matrix(k_mat.adjoint() * k_mat - re_ref_dense));
    } else {
      eps_k = psd_diff_trace_norm_lowrank(k_mat, re_factor);
    }

    Operator x_op = conjugate_on_leading(wu, rho_n.op(), theta_layout);
    x_op.mat *= scale;
    const Operator twirled = twirl(hw, num_unitaries, x_op);
    const double theta_k = trace_norm(Matrix(twirled.mat - theta_ref));

    run.eps_candidates.push_back(eps_k);
    run.theta_candidates.push_back(theta_k);
    const double score = std::max(eps_k, theta_k);
    if (best < 0 || score < best_score) {
      best = k;
      best_score = score;
    }
  }
  run.chosen_candidate = best;
  run.eps_emp = run.eps_candidates[best];
  run.theta_emp = run.theta_candidates[best];
  const Matrix& u_best = candidates[best];

  // Uhlmann alignment between the renormalized projected state and psi_n.
  const Matrix w_proj_u = iso.w().adjoint() * (iso.w() * u_best);
  Vector phi_a = apply_on_leading(w_proj_u, psi_n.amplitudes());
  phi_a *= sqrt_scale;
  run.renormalization = phi_a.squaredNorm();
  const PureState phi_hat(psi_n.layout(), phi_a / phi_a.norm());
  const UhlmannResult uh = uhlmann_unitary(phi_hat, psi_n, {ga, gb});
  const PureState aligned = apply_on_subsystems(uh.unitary, {ga, gb}, psi_n);
  run.uhlmann_overlap =
      std::abs(phi_hat.amplitudes().dot(aligned.amplitudes()));
  run.alignment_residual = pure_trace_distance(phi_hat, aligned);

  // Output state: average the M embedded-unitary conjugations.
  const Operator x0 = conjugate_on_leading(uh.unitary, rho_n.op());
  Matrix acc = Matrix::Zero(rho_n.dim(), rho_n.dim());
  for (std::int64_t i = 0; i < num_unitaries; ++i) {
    const Operator embedded = embed_unitary(iso, hw.unitaries[i]);
    acc += conjugate_on_leading(embedded.mat, x0).mat;
  }
  acc /= double(num_unitaries);
  run.upsilon = DensityOperator(Operator(rho_n.layout(), std::move(acc)));
  run.tau = iso.embedded_mixed();

  // Protocol error measurements.
  const ErasureReport er =
      erasure_error(run.upsilon, run.tau, rho_br_n.op());
  run.erasure_err = er.product_distance;
  run.marginal_err = er.marginal_distance;
  run.decon_err = deconstruction_error(run.upsilon, iso);
  {
    Operator ups_br = partial_trace(run.upsilon.op(), {gb, gr});
    Operator ups_a = partial_trace(run.upsilon.op(), {ga});
    run.product_ref_err =
        trace_norm(run.upsilon.mat() - kron(run.tau, rho_br_n.op()).mat);
    run.erasure_err_marginal_tau =
        trace_norm(run.upsilon.mat() - kron(ups_a, ups_br).mat);
  }
  run.chain_bound_emp = alignment_bound(run.eps_emp) + run.theta_emp;

  const double cmi_target =
      cmi(config.rho, {label_a}, {label_r}, {label_b});
  run.bounds = make_bound_report(config.alpha, config.delta, n, dim_a, dim_b,
                                 dim_r, dim_e, sizes.log2_f, sizes.log2_m,
                                 h_at_ab, h_a_abr, cmi_target, config.exp_base);

  run.duration_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return run;
}

}  // namespace qdecon
