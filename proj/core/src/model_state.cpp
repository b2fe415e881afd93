#include "dwreg/model_state.hpp"

#include <cmath>
#include <numbers>

#include "dwreg/numeric.hpp"

namespace dwreg {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

// Largest dense Gram cache: n <= 2048 keeps it within ~32 MB.
constexpr int kGramCacheLimit = 2048;

Vector remove_entry(const Vector& v, int pos) {
  Vector out(v.size() - 1);
  out.head(pos) = v.head(pos);
  out.tail(v.size() - pos - 1) = v.tail(v.size() - pos - 1);
  return out;
}

Matrix remove_row_col(const Matrix& m, int pos) {
  const auto n = m.rows();
  Matrix out(n - 1, n - 1);
  out.topLeftCorner(pos, pos) = m.topLeftCorner(pos, pos);
  out.topRightCorner(pos, n - pos - 1) = m.topRightCorner(pos, n - pos - 1);
  out.bottomLeftCorner(n - pos - 1, pos) = m.bottomLeftCorner(n - pos - 1, pos);
  out.bottomRightCorner(n - pos - 1, n - pos - 1) =
      m.bottomRightCorner(n - pos - 1, n - pos - 1);
  return out;
}

// Cholesky factor of the covariance with index `pos` marginalized out:
// delete row `pos` of T, then chase the off-triangular entries with plane
// rotations applied to column pairs.
Matrix chol_delete_index(const Matrix& T, int pos) {
  const auto m = T.rows();
  Matrix R(m - 1, m);
  R.topRows(pos) = T.topRows(pos);
  R.bottomRows(m - pos - 1) = T.bottomRows(m - pos - 1);
  for (Eigen::Index c = pos; c + 1 < m; ++c) {
    const double a = R(c, c);
    const double b = R(c, c + 1);
    const double r = std::hypot(a, b);
    if (r == 0.0) continue;
    const double cs = a / r;
    const double sn = b / r;
    for (Eigen::Index i = c; i < m - 1; ++i) {
      const double x = R(i, c);
      const double y = R(i, c + 1);
      R(i, c) = cs * x + sn * y;
      R(i, c + 1) = cs * y - sn * x;
    }
  }
  return R.leftCols(m - 1);
}

// In-place rank-one Cholesky downdate L L' - u u'; false on loss of
// positive definiteness.
bool chol_downdate(Matrix& L, Vector u) {
  const auto m = L.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = L(i, i);
    const double s = u[i];
    const double r2 = (d - s) * (d + s);
    if (!(r2 > 0.0)) return false;
    const double r = std::sqrt(r2);
    const double cs = r / d;
    const double sn = s / d;
    L(i, i) = r;
    for (Eigen::Index k = i + 1; k < m; ++k) {
      L(k, i) = (L(k, i) - sn * u[k]) / cs;
      u[k] = cs * u[k] - sn * L(k, i);
    }
  }
  return true;
}

// Cheap O(q^2) sanity check on the maintained factor: compare row norms of T
// against the diagonal of Sigma; a full dense refactorization is the fallback.
void repair_factor_if_needed(Matrix& T, const Matrix& Sigma) {
  const auto m = T.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = T.row(i).head(i + 1).squaredNorm();
    worst = std::max(worst, std::abs(d - Sigma(i, i)) / std::max(1.0, std::abs(Sigma(i, i))));
  }
  if (!(worst <= 1e-8) || !T.allFinite()) {
    T = chol_psd(Sigma, "posterior covariance");
  }
}

}  // namespace

FitContext FitContext::build(const Dataset& ds, const DesignMatrix& design,
                             const SmoothPrior& sp, const Hyperparams& h) {
  h.validate();
  if (design.X.cols() != sp.n)
    throw std::invalid_argument("fit context: design and prior disagree on n");
  FitContext ctx;
  ctx.h = h;
  ctx.prior = &sp;
  ctx.X = design.X;
  ctx.N = static_cast<long>(ds.records.size());
  ctx.y = ds.values();
  ctx.noise_var = ds.sigmas().array().square();
  if (static_cast<long>(ctx.X.rows()) != ctx.N)
    throw std::invalid_argument("fit context: design rows do not match dataset");

  Vector w = ctx.noise_var.array().inverse();  // 1/sigma_i^2
  if (ctx.N > 0 && !w.allFinite())
    throw numerical_error("fit context: non-finite observation weights");
  ctx.vfull = ctx.X.transpose() * (w.asDiagonal() * ctx.y).eval();
  ctx.logdetS = ctx.noise_var.array().log().sum();
  ctx.y_Sinv_y = (ctx.y.array().square() * w.array()).sum();
  if (sp.n <= kGramCacheLimit) {
    ctx.Qfull = ctx.X.transpose() * w.asDiagonal() * ctx.X;
    ctx.q_cached = true;
  }
  return ctx;
}

double FitContext::q_entry(int a, int b) const {
  if (q_cached) return Qfull(a, b);
  double s = 0.0;
  for (long i = 0; i < N; ++i) s += X(i, a) * X(i, b) / noise_var[i];
  return s;
}

int ModelState::position_of(int column) const {
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (gamma[i] == column) return static_cast<int>(i);
  return -1;
}

ModelState init_state(const FitContext& ctx, const std::vector<int>& gamma0) {
  const SmoothPrior& sp = *ctx.prior;
  const auto l = static_cast<Eigen::Index>(gamma0.size());
  {
    std::vector<char> seen(sp.n, 0);
    for (int c : gamma0) {
      if (c < 0 || c >= sp.n) throw std::invalid_argument("init_state: column out of range");
      if (seen[c]++) throw std::invalid_argument("init_state: duplicate column");
    }
    for (int c = 0; c < ctx.h.num_scaling(); ++c)
      if (!seen[c]) throw std::invalid_argument("init_state: scaling columns must be included");
  }

  ModelState st;
  st.gamma = gamma0;
  st.lambda = ctx.h.lambda;
  st.num_scaling = ctx.h.num_scaling();

  Matrix omega_g(l, l);
  Matrix q_g(l, l);
  st.vG.resize(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    st.vG[i] = ctx.vfull[gamma0[i]];
    for (Eigen::Index j = 0; j < l; ++j) {
      omega_g(i, j) = sp.Omega(gamma0[i], gamma0[j]);
      q_g(i, j) = ctx.q_entry(gamma0[i], gamma0[j]);
    }
  }

  st.LambdaG = invert_psd(omega_g, "prior precision submatrix");
  const Matrix precision = q_g + omega_g / ctx.h.lambda;
  st.Sigma = invert_psd(precision, "posterior precision");
  st.Sigma = 0.5 * (st.Sigma + st.Sigma.transpose());
  st.mu = st.Sigma * st.vG;
  st.T = chol_psd(st.Sigma, "posterior covariance");
  st.logml = candidate_logml(ctx, st);
  return st;
}

double candidate_logml(const FitContext& ctx, const ModelState& st) {
  // p(y|gamma) = p(theta|gamma) p(y|theta,gamma) / p(theta|y,gamma) at
  // theta_gamma = 0: only determinants and the posterior quadratic survive.
  const auto l = static_cast<Eigen::Index>(st.gamma.size());
  const double logdet_sigma = logdet_from_chol(st.T);
  const Matrix Lprior = chol_psd(st.LambdaG, "prior covariance submatrix");
  const double logdet_prior = l * std::log(st.lambda) + logdet_from_chol(Lprior);
  return -0.5 * logdet_prior + 0.5 * logdet_sigma + 0.5 * st.mu.dot(st.vG) -
         0.5 * (static_cast<double>(ctx.N) * kLog2Pi + ctx.logdetS + ctx.y_Sinv_y);
}

MoveResult down_move(const ModelState& st, int pos) {
  const int l = st.size();
  if (pos < 0 || pos >= l) throw std::invalid_argument("down_move: position out of range");
  if (st.gamma[pos] < st.num_scaling)
    throw std::invalid_argument("down_move: scaling columns are immovable");
  if (l < 2) throw std::invalid_argument("down_move: model too small");

  const double s_ll = st.Sigma(pos, pos);
  const double lam_ll = st.LambdaG(pos, pos);
  if (!(s_ll > 0.0) || !(lam_ll > 0.0))
    throw numerical_error("down_move: degenerate pivot");

  MoveResult out;
  out.log_ratio = 0.5 * std::log(st.lambda * lam_ll / s_ll) -
                  0.5 * st.mu[pos] * st.mu[pos] / s_ll;

  ModelState& ns = out.state;
  ns.lambda = st.lambda;
  ns.num_scaling = st.num_scaling;
  ns.gamma = st.gamma;
  ns.gamma.erase(ns.gamma.begin() + pos);

  const Vector sigma_col = remove_entry(st.Sigma.col(pos), pos);
  ns.Sigma = remove_row_col(st.Sigma, pos);
  ns.Sigma.noalias() -= sigma_col * (sigma_col.transpose() / s_ll);
  ns.mu = remove_entry(st.mu, pos) - sigma_col * (st.mu[pos] / s_ll);
  ns.vG = remove_entry(st.vG, pos);

  const Vector lambda_col = remove_entry(st.LambdaG.col(pos), pos);
  ns.LambdaG = remove_row_col(st.LambdaG, pos);
  ns.LambdaG.noalias() -= lambda_col * (lambda_col.transpose() / lam_ll);

  ns.T = chol_delete_index(st.T, pos);
  if (!chol_downdate(ns.T, sigma_col / std::sqrt(s_ll))) {
    ns.T = chol_psd(ns.Sigma, "posterior covariance");
  }
  repair_factor_if_needed(ns.T, ns.Sigma);

  ns.logml = st.logml + out.log_ratio;
  return out;
}

MoveResult up_move(const ModelState& st, int new_col, const FitContext& ctx) {
  const SmoothPrior& sp = *ctx.prior;
  if (new_col < ctx.h.num_scaling() || new_col >= sp.n)
    throw std::invalid_argument("up_move: only detail columns can be added");
  if (st.position_of(new_col) >= 0)
    throw std::invalid_argument("up_move: column already in the model");

  const int l = st.size();
  Vector q_cross(l), omega_cross(l);
  for (int i = 0; i < l; ++i) {
    q_cross[i] = ctx.q_entry(st.gamma[i], new_col);
    omega_cross[i] = sp.Omega(st.gamma[i], new_col);
  }
  const double q_new = ctx.q_entry(new_col, new_col);
  const double omega_new = sp.Omega(new_col, new_col);

  const Vector b = q_cross + omega_cross / st.lambda;
  const Vector hvec = st.Sigma * b;
  const double c = q_new + omega_new / st.lambda;
  const double schur = c - b.dot(hvec);

  const Vector h0 = st.LambdaG * omega_cross;
  const double schur0 = omega_new - omega_cross.dot(h0);
  if (!(schur > 0.0) || !(schur0 > 0.0))
    throw numerical_error("up_move: degenerate Schur complement");

  MoveResult out;
  ModelState& ns = out.state;
  ns.lambda = st.lambda;
  ns.num_scaling = st.num_scaling;
  ns.gamma.reserve(l + 1);
  ns.gamma.push_back(new_col);
  ns.gamma.insert(ns.gamma.end(), st.gamma.begin(), st.gamma.end());

  ns.Sigma.resize(l + 1, l + 1);
  ns.Sigma(0, 0) = 1.0 / schur;
  ns.Sigma.col(0).tail(l) = -hvec / schur;
  ns.Sigma.row(0).tail(l) = ns.Sigma.col(0).tail(l).transpose();
  ns.Sigma.bottomRightCorner(l, l) = st.Sigma;
  ns.Sigma.bottomRightCorner(l, l).noalias() += hvec * (hvec.transpose() / schur);

  ns.LambdaG.resize(l + 1, l + 1);
  ns.LambdaG(0, 0) = 1.0 / schur0;
  ns.LambdaG.col(0).tail(l) = -h0 / schur0;
  ns.LambdaG.row(0).tail(l) = ns.LambdaG.col(0).tail(l).transpose();
  ns.LambdaG.bottomRightCorner(l, l) = st.LambdaG;
  ns.LambdaG.bottomRightCorner(l, l).noalias() += h0 * (h0.transpose() / schur0);

  ns.vG.resize(l + 1);
  ns.vG[0] = ctx.vfull[new_col];
  ns.vG.tail(l) = st.vG;

  // mu* = (0, mu) + schur * Sigma*_1 (Sigma*_1 . v*)
  const Vector sigma_first = ns.Sigma.col(0);
  ns.mu.resize(l + 1);
  ns.mu[0] = 0.0;
  ns.mu.tail(l) = st.mu;
  ns.mu.noalias() += sigma_first * (schur * sigma_first.dot(ns.vG));

  ns.T.resize(l + 1, l + 1);
  ns.T.setZero();
  ns.T.col(0) = sigma_first / std::sqrt(ns.Sigma(0, 0));
  ns.T.bottomRightCorner(l, l) = st.T;
  repair_factor_if_needed(ns.T, ns.Sigma);

  out.log_ratio = -(0.5 * std::log(st.lambda * ns.LambdaG(0, 0) / ns.Sigma(0, 0)) -
                    0.5 * ns.mu[0] * ns.mu[0] / ns.Sigma(0, 0));
  ns.logml = st.logml + out.log_ratio;
  return out;
}

Vector sample_theta(const ModelState& st, int n_total, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto l = static_cast<Eigen::Index>(st.gamma.size());
  Vector z(l);
  for (Eigen::Index i = 0; i < l; ++i) z[i] = normal(rng);
  const Vector theta_g = st.mu + st.T.triangularView<Eigen::Lower>() * z;
  Vector full = Vector::Zero(n_total);
  for (int i = 0; i < st.size(); ++i) full[st.gamma[i]] = theta_g[i];
  return full;
}

}  // namespace dwreg
