#pragma once

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curvtv/curvature.hpp"
#include "curvtv/image.hpp"
#include "curvtv/operators.hpp"
#include "curvtv/spectral.hpp"

namespace curvtv {

/// Data term: l2 (Gaussian), l1 (impulse), kl (Poisson), inpaint (l2 on the
/// observed pixels only).
enum class Fidelity { l2, l1, kl, inpaint };

inline std::string_view to_string(Fidelity f) {
  switch (f) {
  case Fidelity::l2: return "l2";
  case Fidelity::l1: return "l1";
  case Fidelity::kl: return "kl";
  case Fidelity::inpaint: return "inpaint";
  }
  return "?";
}

/// Thrown when an iterate stops being finite.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double lambda = 0.07;
  double mu = 2.0;
  double mu2 = 0.0;    // penalty of the fidelity split; unused for l2
  double tau = 0.0;    // proximal weight on u
  double sigma = 0.0;  // proximal weight on v
  int max_iter = 300;
  double tol = 3e-5;
  CurvatureSpec curvature{};
  Fidelity fidelity = Fidelity::l2;
  std::optional<InpaintMask> mask;
  bool track_delta_k = false;

  void validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("SolverConfig: lambda must be positive");
    if (!(mu > 0.0)) throw std::invalid_argument("SolverConfig: mu must be positive");
    if (!(tau >= 0.0)) throw std::invalid_argument("SolverConfig: tau must be nonnegative");
    if (!(sigma >= 0.0)) throw std::invalid_argument("SolverConfig: sigma must be nonnegative");
    if (max_iter <= 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (fidelity != Fidelity::l2 && !(mu2 > 0.0))
      throw std::invalid_argument("SolverConfig: mu2 must be positive for the " +
                                  std::string(to_string(fidelity)) + " fidelity");
    if (fidelity == Fidelity::inpaint && !mask)
      throw std::invalid_argument("SolverConfig: inpaint fidelity requires a mask");
    curvature.validate();
  }
};

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double residual_l1 = 0.0;
  double rel_err_u = 0.0;
  double rel_err_lambda = 0.0;
  std::optional<double> delta_k;
  double time_ms = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct SolveResult {
  Image restored;
  IterationTrace trace;
  int iterations_used = 0;
  bool converged = false;
  /// Per-channel results of a colour solve; empty for single-channel solves.
  std::vector<SolveResult> channels;
};

// ---------------------------------------------------------------------------
// Elementwise helpers

inline double l1_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double l1_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

inline double shrink_scalar(double a, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("shrink_scalar: negative threshold");
  const double m = std::abs(a) - threshold;
  return m > 0.0 ? std::copysign(m, a) : 0.0;
}

/// Per-pixel isotropic soft threshold: max(|a| - t, 0) a / |a|, with 0 at a = 0.
inline VectorField shrink(const VectorField& a, std::span<const double> threshold) {
  a.check_consistent();
  if (threshold.size() != a.pixels()) throw std::invalid_argument("shrink: threshold size mismatch");
  VectorField out(a.width, a.height);
  for (std::size_t k = 0; k < a.pixels(); ++k) {
    const double t = threshold[k];
    if (!(t >= 0.0)) throw std::invalid_argument("shrink: negative threshold");
    const double norm = std::hypot(a.x[k], a.y[k]);
    if (norm > t) {
      const double s = (norm - t) / norm;
      out.x[k] = s * a.x[k];
      out.y[k] = s * a.y[k];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subproblem updates

namespace detail {

// rhs_base - div(mu v + Lambda) + tau u_prev
inline Image u_rhs(const Image& base, const VectorField& v, const VectorField& lam,
                   const Image& u_prev, double mu, double tau) {
  VectorField p(v.width, v.height);
  for (std::size_t k = 0; k < v.pixels(); ++k) {
    p.x[k] = mu * v.x[k] + lam.x[k];
    p.y[k] = mu * v.y[k] + lam.y[k];
  }
  Image rhs = base;
  const Image div = divergence(p);
  auto r = rhs.values();
  auto d = div.values();
  auto up = u_prev.values();
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = r[k] - d[k] + tau * up[k];
  return rhs;
}

inline void check_u_inputs(const Image& f, const VectorField& v, const VectorField& lam,
                           const Image& u_prev, const char* who) {
  detail::require_single_channel(f, who);
  detail::require_same_grid(f.width(), f.height(), v.width, v.height, who);
  detail::require_same_grid(f.width(), f.height(), lam.width, lam.height, who);
  if (!f.same_shape(u_prev)) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

} // namespace detail

/// Minimiser of the quadratic u-subproblem for the l2 data term:
/// ((lambda + tau) I - mu Lap) u = lambda f + tau u_prev - div(mu v + Lambda).
inline Image update_u_l2(const Image& f, const VectorField& v, const VectorField& lam,
                         const Image& u_prev, const SolverConfig& cfg, SpectralSolver& solver) {
  detail::check_u_inputs(f, v, lam, u_prev, "update_u_l2");
  Image base = f;
  for (double& x : base.values()) x *= cfg.lambda;
  return solver.solve(cfg.lambda + cfg.tau, cfg.mu, detail::u_rhs(base, v, lam, u_prev, cfg.mu, cfg.tau));
}

inline Image update_u_l2(const Image& f, const VectorField& v, const VectorField& lam,
                         const Image& u_prev, const SolverConfig& cfg) {
  SpectralSolver solver(f.width(), f.height());
  return update_u_l2(f, v, lam, u_prev, cfg, solver);
}

/// Shared u-update for the split fidelities: the split contributes
/// (mu2/2)||u - target||^2, so the system is
/// ((mu2 + tau) I - mu Lap) u = mu2 target + tau u_prev - div(mu v + Lambda).
inline Image update_u_split(const Image& target, const VectorField& v, const VectorField& lam,
                            const Image& u_prev, const SolverConfig& cfg, SpectralSolver& solver) {
  detail::check_u_inputs(target, v, lam, u_prev, "update_u_split");
  if (!(cfg.mu2 > 0.0)) throw std::invalid_argument("update_u_split: mu2 must be positive");
  Image base = target;
  for (double& x : base.values()) x *= cfg.mu2;
  return solver.solve(cfg.mu2 + cfg.tau, cfg.mu, detail::u_rhs(base, v, lam, u_prev, cfg.mu, cfg.tau));
}

/// l1 data term, split w = u - f with penalty (mu2/2)||u - f - w + b2||^2.
/// u is pulled towards f + w - b2.
inline Image update_u_l1(const Image& f, const Image& w, const Image& b2, const VectorField& v,
                         const VectorField& lam, const Image& u_prev, const SolverConfig& cfg,
                         SpectralSolver& solver) {
  if (!f.same_shape(w) || !f.same_shape(b2)) throw std::invalid_argument("update_u_l1: dimension mismatch");
  Image target = f;
  auto t = target.values();
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = t[k] + w.values()[k] - b2.values()[k];
  return update_u_split(target, v, lam, u_prev, cfg, solver);
}

/// w = shrink_scalar(u - f + b2, lambda / mu2).
inline Image update_w_l1(const Image& f, const Image& u, const Image& b2, const SolverConfig& cfg) {
  if (!(cfg.mu2 > 0.0)) throw std::invalid_argument("update_w_l1: mu2 must be positive");
  if (!f.same_shape(u) || !f.same_shape(b2)) throw std::invalid_argument("update_w_l1: dimension mismatch");
  const double t = cfg.lambda / cfg.mu2;
  Image w(f.width(), f.height());
  auto fv = f.values(), uv = u.values(), bv = b2.values();
  auto wv = w.values();
  for (std::size_t k = 0; k < wv.size(); ++k) wv[k] = shrink_scalar(uv[k] - fv[k] + bv[k], t);
  return w;
}

/// Poisson data term, split w = u with penalty (mu2/2)||w - u + b2||^2;
/// u is pulled towards w + b2.
inline Image update_u_kl(const Image& w, const Image& b2, const VectorField& v, const VectorField& lam,
                         const Image& u_prev, const SolverConfig& cfg, SpectralSolver& solver) {
  if (!w.same_shape(b2)) throw std::invalid_argument("update_u_kl: dimension mismatch");
  Image target = w;
  auto t = target.values();
  for (std::size_t k = 0; k < t.size(); ++k) t[k] += b2.values()[k];
  return update_u_split(target, v, lam, u_prev, cfg, solver);
}

/// Pointwise minimiser of lambda (w - f log w) + (mu2/2)(w - u + b2)^2, the
/// nonnegative root of mu2 w^2 + (lambda - mu2 (u - b2)) w - lambda f = 0.
inline double kl_root(double f, double u_minus_b, double lambda, double mu2) {
  const double p = mu2 * u_minus_b - lambda;
  const double disc = std::sqrt(p * p + 4.0 * mu2 * lambda * f);
  // Pick the cancellation-free branch of the quadratic formula.
  if (p >= 0.0) return (p + disc) / (2.0 * mu2);
  const double denom = disc - p;  // > 0 here
  return denom > 0.0 ? (2.0 * lambda * f) / denom : 0.0;
}

inline Image update_w_kl(const Image& f, const Image& u, const Image& b2, const SolverConfig& cfg) {
  if (!(cfg.mu2 > 0.0)) throw std::invalid_argument("update_w_kl: mu2 must be positive");
  if (!f.same_shape(u) || !f.same_shape(b2)) throw std::invalid_argument("update_w_kl: dimension mismatch");
  Image w(f.width(), f.height());
  auto fv = f.values(), uv = u.values(), bv = b2.values();
  auto wv = w.values();
  for (std::size_t k = 0; k < wv.size(); ++k) {
    if (!(fv[k] >= 0.0)) throw std::invalid_argument("update_w_kl: negative data value");
    wv[k] = kl_root(fv[k], uv[k] - bv[k], cfg.lambda, cfg.mu2);
  }
  return w;
}

/// Masked l2 data term, split w = u with penalty (mu2/2)||w - u - b2||^2:
/// w = (lambda chi f + mu2 (u + b2)) / (lambda chi + mu2).
inline Image update_w_inpaint(const Image& f, const Image& u, const Image& b2, const InpaintMask& mask,
                              const SolverConfig& cfg) {
  if (!(cfg.mu2 > 0.0)) throw std::invalid_argument("update_w_inpaint: mu2 must be positive");
  if (!f.same_shape(u) || !f.same_shape(b2)) throw std::invalid_argument("update_w_inpaint: dimension mismatch");
  detail::require_same_grid(f.width(), f.height(), mask.width(), mask.height(), "update_w_inpaint");
  Image w(f.width(), f.height());
  auto fv = f.values(), uv = u.values(), bv = b2.values();
  auto wv = w.values();
  for (std::size_t k = 0; k < wv.size(); ++k) {
    const double chi = mask.known(k) ? cfg.lambda : 0.0;
    wv[k] = (chi * fv[k] + cfg.mu2 * (uv[k] + bv[k])) / (chi + cfg.mu2);
  }
  return w;
}

inline Image update_u_inpaint(const Image& w, const Image& b2, const VectorField& v, const VectorField& lam,
                              const Image& u_prev, const SolverConfig& cfg, SpectralSolver& solver) {
  if (!w.same_shape(b2)) throw std::invalid_argument("update_u_inpaint: dimension mismatch");
  Image target = w;
  auto t = target.values();
  for (std::size_t k = 0; k < t.size(); ++k) t[k] -= b2.values()[k];
  return update_u_split(target, v, lam, u_prev, cfg, solver);
}

/// v = shrink((mu grad u - Lambda + sigma v_prev) / (mu + sigma), g / (mu + sigma)).
inline VectorField update_v(const Image& u_new, const VectorField& v_prev, const VectorField& lam,
                            const WeightMap& weights, const SolverConfig& cfg) {
  const VectorField g = gradient_forward(u_new);
  detail::require_same_grid(g.width, g.height, v_prev.width, v_prev.height, "update_v");
  detail::require_same_grid(g.width, g.height, lam.width, lam.height, "update_v");
  detail::require_same_grid(g.width, g.height, weights.width, weights.height, "update_v");
  const double denom = cfg.mu + cfg.sigma;
  VectorField a(g.width, g.height);
  std::vector<double> t(g.pixels());
  for (std::size_t k = 0; k < g.pixels(); ++k) {
    a.x[k] = (cfg.mu * g.x[k] - lam.x[k] + cfg.sigma * v_prev.x[k]) / denom;
    a.y[k] = (cfg.mu * g.y[k] - lam.y[k] + cfg.sigma * v_prev.y[k]) / denom;
    t[k] = weights.values[k] / denom;
  }
  return shrink(a, t);
}

/// Lambda + mu (v - grad u).
inline VectorField update_multiplier(const VectorField& lam, const VectorField& v_new, const Image& u_new,
                                     double mu) {
  const VectorField g = gradient_forward(u_new);
  detail::require_same_grid(g.width, g.height, lam.width, lam.height, "update_multiplier");
  detail::require_same_grid(g.width, g.height, v_new.width, v_new.height, "update_multiplier");
  VectorField out = lam;
  for (std::size_t k = 0; k < g.pixels(); ++k) {
    out.x[k] += mu * (v_new.x[k] - g.x[k]);
    out.y[k] += mu * (v_new.y[k] - g.y[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics

/// sum g |grad u| with the supplied weights.
inline double weighted_tv(const Image& u, const WeightMap& weights) {
  const VectorField g = gradient_forward(u);
  double s = 0.0;
  for (std::size_t k = 0; k < g.pixels(); ++k) s += weights.values[k] * std::hypot(g.x[k], g.y[k]);
  return s;
}

/// Value of the data term at u. The kl term is evaluated on `split` when one
/// is given, with log arguments clamped at 1e-12.
inline double fidelity_energy(const Image& u, const Image& f, const SolverConfig& cfg,
                              const Image* split = nullptr) {
  auto uv = u.values(), fv = f.values();
  double s = 0.0;
  switch (cfg.fidelity) {
  case Fidelity::l2:
    for (std::size_t k = 0; k < uv.size(); ++k) s += (uv[k] - fv[k]) * (uv[k] - fv[k]);
    return 0.5 * cfg.lambda * s;
  case Fidelity::l1:
    return cfg.lambda * l1_diff(uv, fv);
  case Fidelity::kl: {
    auto xv = split ? split->values() : uv;
    for (std::size_t k = 0; k < xv.size(); ++k) s += xv[k] - fv[k] * std::log(std::max(xv[k], 1e-12));
    return cfg.lambda * s;
  }
  case Fidelity::inpaint:
    for (std::size_t k = 0; k < uv.size(); ++k)
      if (cfg.mask->known(k)) s += (uv[k] - fv[k]) * (uv[k] - fv[k]);
    return 0.5 * cfg.lambda * s;
  }
  return s;
}

/// sum g(kappa(weight_source)) |grad u| + data term at u.
inline double energy(const Image& u, const Image& weight_source, const Image& f, const SolverConfig& cfg) {
  return weighted_tv(u, curvature_weights(weight_source, cfg.curvature)) + fidelity_energy(u, f, cfg);
}

/// <(g^k - g_ref) s^k, v^k - v_ref> summed over pixels, s^k = v^k/|v^k| (0 at v^k = 0).
inline double delta_k_value(const VectorField& v, const WeightMap& g, const VectorField& v_ref,
                            const WeightMap& g_ref) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.pixels(); ++k) {
    const double n = std::hypot(v.x[k], v.y[k]);
    if (n == 0.0) continue;
    const double dot = (v.x[k] * (v.x[k] - v_ref.x[k]) + v.y[k] * (v.y[k] - v_ref.y[k])) / n;
    s += (g.values[k] - g_ref.values[k]) * dot;
  }
  return s;
}

struct DeltaSample {
  VectorField v;
  CurvatureMap kappa;
};

/// Delta_k for each stored iterate against a reference point.
inline std::vector<double> delta_k_diagnostic(std::span<const DeltaSample> history, const DeltaSample& reference,
                                              const CurvatureSpec& spec) {
  if (history.empty()) throw std::invalid_argument("delta_k_diagnostic: empty iterate history");
  const WeightMap g_ref = weight_map(reference.kappa, spec);
  std::vector<double> out;
  out.reserve(history.size());
  for (const auto& h : history) out.push_back(delta_k_value(h.v, weight_map(h.kappa, spec), reference.v, g_ref));
  return out;
}

// ---------------------------------------------------------------------------
// Main loop

namespace detail {

inline double relative_change(std::span<const double> now, std::span<const double> before) {
  const double den = l1_norm(before);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return l1_diff(now, before) / den;
}

inline double field_relative_change(const VectorField& now, const VectorField& before) {
  const double den = l1_norm(before.x) + l1_norm(before.y);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return (l1_diff(now.x, before.x) + l1_diff(now.y, before.y)) / den;
}

inline double constraint_residual(const VectorField& v, const Image& u) {
  const VectorField g = gradient_forward(u);
  return l1_diff(v.x, g.x) + l1_diff(v.y, g.y);
}

inline void require_finite_state(const Image& u, const VectorField& v, const VectorField& lam, int iter) {
  const std::string at = " at iteration " + std::to_string(iter);
  if (!u.all_finite()) throw NumericalError("admm_solve: non-finite u" + at);
  if (!v.all_finite()) throw NumericalError("admm_solve: non-finite v" + at);
  if (!lam.all_finite()) throw NumericalError("admm_solve: non-finite multiplier" + at);
}

struct DeltaReference {
  VectorField v;
  WeightMap g;
};

// Runs the iteration; when `ref` is set, Delta_k against it is logged.
inline SolveResult run_admm(const Image& f, const SolverConfig& cfg, const DeltaReference* ref,
                            VectorField* final_v, WeightMap* final_g) {
  using clock = std::chrono::steady_clock;
  const std::size_t w = f.width(), h = f.height();
  SpectralSolver solver(w, h);

  Image u = f;
  VectorField v(w, h), lam(w, h);
  Image split(w, h), b2(w, h);
  if (cfg.fidelity == Fidelity::kl || cfg.fidelity == Fidelity::inpaint) split = f;
  if (cfg.fidelity == Fidelity::kl)
    for (double& x : split.values()) x = std::max(x, 0.0);

  WeightMap prev_g = curvature_weights(u, cfg.curvature);
  WeightMap g = prev_g;

  SolveResult res;
  res.trace.records.reserve(static_cast<std::size_t>(cfg.max_iter));
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const auto t0 = clock::now();
    Image u_new;
    // (i) u-subproblem
    switch (cfg.fidelity) {
    case Fidelity::l2: u_new = update_u_l2(f, v, lam, u, cfg, solver); break;
    case Fidelity::l1: u_new = update_u_l1(f, split, b2, v, lam, u, cfg, solver); break;
    case Fidelity::kl: u_new = update_u_kl(split, b2, v, lam, u, cfg, solver); break;
    case Fidelity::inpaint: u_new = update_u_inpaint(split, b2, v, lam, u, cfg, solver); break;
    }
    if (!u_new.all_finite()) throw NumericalError("admm_solve: non-finite u at iteration " + std::to_string(k));
    // fidelity split
    switch (cfg.fidelity) {
    case Fidelity::l2: break;
    case Fidelity::l1: split = update_w_l1(f, u_new, b2, cfg); break;
    case Fidelity::kl: split = update_w_kl(f, u_new, b2, cfg); break;
    case Fidelity::inpaint: split = update_w_inpaint(f, u_new, b2, *cfg.mask, cfg); break;
    }
    // (ii) curvature weights from the new iterate, (iii) v, (iv) multipliers
    g = curvature_weights(u_new, cfg.curvature);
    VectorField v_new = update_v(u_new, v, lam, g, cfg);
    VectorField lam_new = update_multiplier(lam, v_new, u_new, cfg.mu);
    if (cfg.fidelity != Fidelity::l2) {
      auto bv = b2.values();
      auto uv = std::as_const(u_new).values(), fv = f.values(), sv = std::as_const(split).values();
      for (std::size_t q = 0; q < bv.size(); ++q) {
        switch (cfg.fidelity) {
        case Fidelity::l1: bv[q] += uv[q] - fv[q] - sv[q]; break;
        case Fidelity::kl: bv[q] += sv[q] - uv[q]; break;
        case Fidelity::inpaint: bv[q] += uv[q] - sv[q]; break;
        case Fidelity::l2: break;
        }
      }
    }
    require_finite_state(u_new, v_new, lam_new, k);

    IterationRecord rec;
    rec.iter = k;
    rec.energy = weighted_tv(u_new, prev_g) +
                 fidelity_energy(u_new, f, cfg, cfg.fidelity == Fidelity::kl ? &split : nullptr);
    rec.residual_l1 = constraint_residual(v_new, u_new);
    rec.rel_err_u = relative_change(u_new.values(), u.values());
    rec.rel_err_lambda = field_relative_change(lam_new, lam);
    if (ref) rec.delta_k = delta_k_value(v_new, g, ref->v, ref->g);

    // (v) stopping test
    const bool done = rec.rel_err_u <= cfg.tol;
    u = std::move(u_new);
    v = std::move(v_new);
    lam = std::move(lam_new);
    prev_g = g;
    rec.time_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    res.trace.records.push_back(rec);
    res.iterations_used = k;
    if (done) {
      res.converged = true;
      break;
    }
  }
  if (final_v) *final_v = v;
  if (final_g) *final_g = g;
  res.restored = std::move(u);
  return res;
}

} // namespace detail

/// Proximal ADMM for the curvature-weighted TV model. Starts from u = f,
/// v = 0, Lambda = 0 and stops when ||u^{k+1} - u^k||_1 / ||u^k||_1 <= tol or
/// after max_iter iterations.
///
/// With track_delta_k set the solve runs twice: once to find the terminal
/// iterate used as the stationary reference, then again (bit-identically)
/// logging Delta_k against it.
inline SolveResult admm_solve(const Image& f, const SolverConfig& cfg) {
  detail::require_single_channel(f, "admm_solve");
  cfg.validate();
  if (!f.all_finite()) throw std::invalid_argument("admm_solve: non-finite input image");
  if (cfg.mask) detail::require_same_grid(f.width(), f.height(), cfg.mask->width(), cfg.mask->height(), "admm_solve");
  if (cfg.fidelity == Fidelity::kl)
    for (double x : f.values())
      if (x < 0.0) throw std::invalid_argument("admm_solve: kl fidelity needs nonnegative data");

  if (!cfg.track_delta_k) return detail::run_admm(f, cfg, nullptr, nullptr, nullptr);

  detail::DeltaReference ref;
  detail::run_admm(f, cfg, nullptr, &ref.v, &ref.g);
  return detail::run_admm(f, cfg, &ref, nullptr, nullptr);
}

/// Channel-wise solve of a 3-channel image with a shared configuration.
inline SolveResult solve_color(const Image& f, const SolverConfig& cfg, bool parallel = false) {
  if (f.channels() != 3) throw std::invalid_argument("solve_color: expected a 3-channel image");
  std::vector<SolveResult> parts(3);
  if (parallel) {
    std::vector<std::future<SolveResult>> jobs;
    for (std::size_t c = 0; c < 3; ++c)
      jobs.push_back(std::async(std::launch::async, [&f, &cfg, c] { return admm_solve(f.channel(c), cfg); }));
    for (std::size_t c = 0; c < 3; ++c) parts[c] = jobs[c].get();
  } else {
    for (std::size_t c = 0; c < 3; ++c) parts[c] = admm_solve(f.channel(c), cfg);
  }
  SolveResult res;
  res.restored = Image(f.width(), f.height(), 3);
  res.converged = true;
  for (std::size_t c = 0; c < 3; ++c) {
    res.restored.set_channel(c, parts[c].restored);
    res.iterations_used = std::max(res.iterations_used, parts[c].iterations_used);
    res.converged = res.converged && parts[c].converged;
  }
  res.channels = std::move(parts);
  return res;
}

/// Dispatches on channel count.
inline SolveResult solve(const Image& f, const SolverConfig& cfg, bool parallel = false) {
  return f.channels() == 3 ? solve_color(f, cfg, parallel) : admm_solve(f, cfg);
}

} // namespace curvtv
