#include "nlos/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlos/errors.hpp"
#include "nlos/parallel.hpp"
#include "nlos/simd/kernels.hpp"

namespace nlos {

namespace {

using simd::KernelTable;

struct TermWork {
  const MeasurementTerm* t = nullptr;
  double sign = 1.0;
  std::size_t m = 0;
  const double* w = nullptr;  // null = unit weights
  bool ambient = false;
  std::vector<cplx> r;    // b + sign LΨx + αν − βy
  std::vector<cplx> q;    // sign LΨd + dα ν (current direction image)
  std::vector<cplx> adj;  // scratch: Lᴴ(w ∘ r)
};

// Shared solver core: keeps per-term residual caches so an inner step costs
// one forward + one adjoint per term.
class Engine {
 public:
  Engine(const FusionProblem& p, const SolverConfig& cfg, AdmmState& st)
      : p_(p), cfg_(cfg), st_(st), n_(p.basis->size()) {
    if (st_.x.empty()) st_.x.assign(n_, 0.0);
    if (st_.z.empty()) st_.z.assign(n_, 0.0);
    if (st_.u.empty()) st_.u.assign(n_, 0.0);
    if (st_.x.size() != n_ || st_.z.size() != n_ || st_.u.size() != n_)
      throw std::invalid_argument("admm state size mismatch");
    terms_.resize(p.terms.size());
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
      const MeasurementTerm& mt = p.terms[i];
      TermWork& tw = terms_[i];
      tw.t = &mt;
      tw.m = mt.op->output_size();
      if (mt.data.size() != tw.m)
        throw std::invalid_argument("measurement data size mismatch");
      if (!mt.sample_weights.empty() && mt.sample_weights.size() != tw.m)
        throw std::invalid_argument("sample weight size mismatch");
      tw.w = mt.sample_weights.empty() ? nullptr : mt.sample_weights.data();
      tw.sign = mt.op->mode_sign();
      tw.ambient = mt.op->has_ambient();
      tw.r.resize(tw.m);
      tw.q.resize(tw.m);
      tw.adj.resize(mt.op->input_size());
    }
    img_.resize(n_);
    dir_img_.resize(n_);
    gimg_.resize(n_);
    refresh_residuals();
  }

  // r_i = b_i + sign_i L_i Ψx + α ν_i − β y_i
  void refresh_residuals() {
    p_.basis->synthesize(st_.x, img_);
    parallel_for(terms_.size(), cfg_.threads, [&](std::size_t i) {
      TermWork& tw = terms_[i];
      tw.t->op->apply(img_, tw.r);
      const auto b = tw.t->op->offset();
      const double nu = tw.ambient ? st_.alpha : 0.0;
      for (std::size_t j = 0; j < tw.m; ++j)
        tw.r[j] = b[j] + tw.sign * tw.r[j] + nu - st_.beta * tw.t->data[j];
    });
  }

  double data_energy() const {
    const auto& k = simd::active_kernels();
    double e = 0.0;
    for (const TermWork& tw : terms_)
      e += tw.t->weight * k.wnrm2sq(tw.m, tw.w, tw.r.data());
    return e;
  }

  // λs‖z‖₁ + Σλ‖r‖²_w + ⟨u, x−z⟩ + μ/2 ‖x−z‖²
  double lagrangian() const {
    const auto& k = simd::active_kernels();
    double l1 = 0.0;
    for (double v : st_.z) l1 += std::abs(v);
    double udot = 0.0, vsq = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = st_.x[i] - st_.z[i];
      udot += st_.u[i] * v;
      vsq += v * v;
    }
    (void)k;
    return cfg_.lambda_s * l1 + data_energy() + udot + 0.5 * cfg_.mu * vsq;
  }

  double plain_objective() const {
    double l1 = 0.0;
    for (double v : st_.x) l1 += std::abs(v);
    return cfg_.lambda_s * l1 + data_energy();
  }

  // One gradient-descent pass over the x-subproblem; returns accepted steps.
  int inner_pass(double eps_grad, int max_inner, int outer_for_error) {
    const auto& k = simd::active_kernels();
    const bool do_alpha = cfg_.estimate_ambient && has_ambient_terms();
    const bool do_beta = cfg_.auto_scale && has_auto_scale_terms();
    std::vector<double> g(n_), d(n_);
    int accepted = 0;
    double f = lagrangian();
    check_finite(f, outer_for_error, 0);
    for (int it = 0; it < max_inner; ++it) {
      // gradient: 2Σλ sign Ψᵀ Re{Lᴴ(w∘r)} + u + μ(x−z), plus the α component
      parallel_for(terms_.size(), cfg_.threads, [&](std::size_t i) {
        TermWork& tw = terms_[i];
        if (tw.w == nullptr) {
          tw.t->op->adjoint(tw.r, tw.adj);
        } else {
          std::vector<cplx> wr(tw.m);
          for (std::size_t j = 0; j < tw.m; ++j) wr[j] = tw.w[j] * tw.r[j];
          tw.t->op->adjoint(wr, tw.adj);
        }
      });
      std::fill(gimg_.begin(), gimg_.end(), 0.0);
      double galpha = 0.0;
      for (TermWork& tw : terms_) {
        const double c = 2.0 * tw.t->weight * tw.sign;
        for (std::size_t j = 0; j < n_; ++j) gimg_[j] += c * tw.adj[j].real();
        if (tw.ambient && do_alpha) {
          double s = 0.0;
          for (std::size_t j = 0; j < tw.m; ++j)
            s += (tw.w ? tw.w[j] : 1.0) * tw.r[j].real();
          galpha += 2.0 * tw.t->weight * s;
        }
      }
      p_.basis->analyze(gimg_, g);
      for (std::size_t i = 0; i < n_; ++i)
        g[i] += st_.u[i] + cfg_.mu * (st_.x[i] - st_.z[i]);
      const double dalpha = do_alpha ? -galpha : 0.0;
      double gn = k.nrm2sq(n_, g.data()) + galpha * galpha;
      if (gn == 0.0) break;
      for (std::size_t i = 0; i < n_; ++i) d[i] = -g[i];

      // direction image and per-term q = sign LΨd + dα ν
      p_.basis->synthesize(d, dir_img_);
      parallel_for(terms_.size(), cfg_.threads, [&](std::size_t i) {
        TermWork& tw = terms_[i];
        tw.t->op->apply(dir_img_, tw.q);
        for (std::size_t j = 0; j < tw.m; ++j) tw.q[j] *= tw.sign;
        if (tw.ambient && dalpha != 0.0)
          for (std::size_t j = 0; j < tw.m; ++j) tw.q[j] += dalpha;
      });

      // exact quadratic coefficients of f(s) = C + B s + A s²
      double a2 = 0.0, b1 = 0.0;
      for (TermWork& tw : terms_) {
        b1 += 2.0 * tw.t->weight * k.wdotc_re(tw.m, tw.w, tw.r.data(), tw.q.data());
        a2 += tw.t->weight * k.wnrm2sq(tw.m, tw.w, tw.q.data());
      }
      double ud = 0.0, vd = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        ud += st_.u[i] * d[i];
        vd += (st_.x[i] - st_.z[i]) * d[i];
      }
      b1 += ud + cfg_.mu * vd;
      a2 += 0.5 * cfg_.mu * k.nrm2sq(n_, d.data());
      const double c0 = f;

      // three-point evaluation + quadratic fit, then the fitted minimizer
      const auto& ts = cfg_.trial_steps;
      double fv[3];
      for (int j = 0; j < 3; ++j) fv[j] = c0 + b1 * ts[j] + a2 * ts[j] * ts[j];
      const double d21 = (fv[1] - fv[0]) / (ts[1] - ts[0]);
      const double d32 = (fv[2] - fv[1]) / (ts[2] - ts[1]);
      const double afit = (d32 - d21) / (ts[2] - ts[0]);
      const double bfit = d21 - afit * (ts[0] + ts[1]);
      int best = 0;
      for (int j = 1; j < 3; ++j)
        if (fv[j] < fv[best]) best = j;
      double step;
      if (afit > 0.0) {
        step = -bfit / (2.0 * afit);
        if (!(step > 0.0)) step = ts[best];
        if (step > 1.0) step = 1.0;
      } else {
        step = ts[best];
      }
      const double fnew = c0 + b1 * step + a2 * step * step;
      if (!(fnew < f)) break;  // monotonic guard

      k.axpy(n_, step, d.data(), st_.x.data());
      if (do_alpha) st_.alpha += step * dalpha;
      for (TermWork& tw : terms_)
        k.caxpy_real(tw.m, step, tw.q.data(), tw.r.data());
      ++accepted;

      if (do_beta) update_beta();
      const double fprev = f;
      f = lagrangian();
      check_finite(f, outer_for_error, it + 1);
      if (std::abs(fprev - f) / std::max(std::abs(fprev), 1e-300) < eps_grad) break;
    }
    return accepted;
  }

  // β = Σλ Re⟨model, y⟩_w / Σλ‖y‖²_w over auto-scaled terms; model = r + βy.
  void update_beta() {
    const auto& k = simd::active_kernels();
    double num = 0.0, den = 0.0;
    std::vector<cplx> model;
    for (TermWork& tw : terms_) {
      if (!tw.t->auto_scale) continue;
      model.assign(tw.r.begin(), tw.r.end());
      k.caxpy_real(tw.m, st_.beta, tw.t->data.data(), model.data());
      num += tw.t->weight * k.wdotc_re(tw.m, tw.w, model.data(), tw.t->data.data());
      den += tw.t->weight * k.wnrm2sq(tw.m, tw.w, tw.t->data.data());
    }
    double beta_new = 1.0;
    if (den > 0.0) {
      beta_new = num / den;
    } else {
      beta_degenerate_ = true;
    }
    const double delta = beta_new - st_.beta;
    if (delta != 0.0) {
      for (TermWork& tw : terms_)
        if (tw.t->auto_scale)
          k.caxpy_real(tw.m, -delta, tw.t->data.data(), tw.r.data());
      st_.beta = beta_new;
    }
  }

  bool has_ambient_terms() const {
    for (const TermWork& tw : terms_)
      if (tw.ambient) return true;
    return false;
  }
  bool has_auto_scale_terms() const {
    for (const TermWork& tw : terms_)
      if (tw.t->auto_scale) return true;
    return false;
  }
  bool beta_degenerate() const { return beta_degenerate_; }

  void check_finite(double f, int outer, int inner) const {
    if (std::isfinite(f)) return;
    const auto& k = simd::active_kernels();
    std::ostringstream os;
    os << "non-finite objective at outer " << outer << " inner " << inner
       << "; term energies:";
    for (std::size_t i = 0; i < terms_.size(); ++i)
      os << " [" << i << "] " << k.wnrm2sq(terms_[i].m, terms_[i].w, terms_[i].r.data());
    throw NumericalError(os.str(), outer);
  }

 private:
  const FusionProblem& p_;
  const SolverConfig& cfg_;
  AdmmState& st_;
  std::size_t n_;
  std::vector<TermWork> terms_;
  std::vector<double> img_, dir_img_, gimg_;
  bool beta_degenerate_ = false;
};

}  // namespace

std::vector<double> shrink(std::span<const double> v, double a) {
  std::vector<double> out(v.size());
  simd::active_kernels().soft_threshold(v.size(), a, v.data(), out.data());
  return out;
}

double objective(const FusionProblem& p, double lambda_s, std::span<const double> x,
                 double alpha, double beta) {
  const auto& k = simd::active_kernels();
  std::vector<double> img(p.basis->size());
  p.basis->synthesize(x, img);
  double e = 0.0;
  for (const MeasurementTerm& mt : p.terms) {
    std::vector<cplx> r = mt.op->predict(img, mt.op->has_ambient() ? alpha : 0.0);
    const auto& k2 = simd::active_kernels();
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= beta * mt.data[j];
    const double* w = mt.sample_weights.empty() ? nullptr : mt.sample_weights.data();
    e += mt.weight * k2.wnrm2sq(r.size(), w, r.data());
  }
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  (void)k;
  return lambda_s * l1 + e;
}

std::vector<double> gradient_x(const FusionProblem& p, std::span<const double> x,
                               double alpha, double beta, std::span<const double> z,
                               std::span<const double> u, double mu) {
  const std::size_t n = p.basis->size();
  std::vector<double> img(n);
  p.basis->synthesize(x, img);
  std::vector<double> gimg(n, 0.0);
  for (const MeasurementTerm& mt : p.terms) {
    std::vector<cplx> r = mt.op->predict(img, mt.op->has_ambient() ? alpha : 0.0);
    for (std::size_t j = 0; j < r.size(); ++j) {
      r[j] -= beta * mt.data[j];
      if (!mt.sample_weights.empty()) r[j] *= mt.sample_weights[j];
    }
    std::vector<cplx> adj(n);
    mt.op->adjoint(r, adj);
    const double c = 2.0 * mt.weight * mt.op->mode_sign();
    for (std::size_t j = 0; j < n; ++j) gimg[j] += c * adj[j].real();
  }
  std::vector<double> g(n);
  p.basis->analyze(gimg, g);
  for (std::size_t i = 0; i < n; ++i) g[i] += u[i] + mu * (x[i] - z[i]);
  return g;
}

double gradient_alpha(const FusionProblem& p, std::span<const double> x, double alpha,
                      double beta) {
  std::vector<double> img(p.basis->size());
  p.basis->synthesize(x, img);
  double g = 0.0;
  for (const MeasurementTerm& mt : p.terms) {
    if (!mt.op->has_ambient()) continue;
    std::vector<cplx> r = mt.op->predict(img, alpha);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double w = mt.sample_weights.empty() ? 1.0 : mt.sample_weights[j];
      s += w * (r[j].real() - beta * mt.data[j].real());
    }
    g += 2.0 * mt.weight * s;
  }
  return g;
}

double auto_scale_update(const FusionProblem& p, std::span<const double> x, double alpha,
                         bool* degenerate) {
  const auto& k = simd::active_kernels();
  std::vector<double> img(p.basis->size());
  p.basis->synthesize(x, img);
  double num = 0.0, den = 0.0;
  for (const MeasurementTerm& mt : p.terms) {
    if (!mt.auto_scale) continue;
    const std::vector<cplx> model =
        mt.op->predict(img, mt.op->has_ambient() ? alpha : 0.0);
    const double* w = mt.sample_weights.empty() ? nullptr : mt.sample_weights.data();
    num += mt.weight * k.wdotc_re(model.size(), w, model.data(), mt.data.data());
    den += mt.weight * k.wnrm2sq(mt.data.size(), w, mt.data.data());
  }
  if (degenerate) *degenerate = den <= 0.0;
  return den > 0.0 ? num / den : 1.0;
}

int x_update(const FusionProblem& p, const SolverConfig& cfg, AdmmState& state,
             double eps_grad) {
  Engine eng(p, cfg, state);
  return eng.inner_pass(eps_grad, cfg.max_inner, state.outer);
}

SolveResult solve(const FusionProblem& p, const SolverConfig& cfg) {
  const auto& k = simd::active_kernels();
  SolveResult res;
  AdmmState& st = res.state;
  const std::size_t n = p.basis->size();
  st.x.assign(n, 0.0);
  st.z.assign(n, 0.0);
  st.u.assign(n, 0.0);

  Engine eng(p, cfg, st);
  std::vector<int> phases;
  if (cfg.phase == 0)
    phases = {1, 2};
  else
    phases = {cfg.phase};

  std::vector<double> x_prev(n), zw(n);
  bool converged = false;
  for (int ph : phases) {
    const PhaseThresholds& thr = ph == 1 ? cfg.phase1 : cfg.phase2;
    converged = false;
    while (st.outer < cfg.max_outer) {
      const auto t0 = std::chrono::steady_clock::now();
      ++st.outer;
      x_prev = st.x;
      const int inner = eng.inner_pass(thr.eps_grad, cfg.max_inner, st.outer);
      // z-update: shrink(x + u/μ, λs/μ); u-update: u ← u − μ(z − x)
      for (std::size_t i = 0; i < n; ++i) zw[i] = st.x[i] + st.u[i] / cfg.mu;
      k.soft_threshold(n, cfg.lambda_s / cfg.mu, zw.data(), st.z.data());
      for (std::size_t i = 0; i < n; ++i) st.u[i] -= cfg.mu * (st.z[i] - st.x[i]);

      double psq = 0.0, dsq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double pv = st.x[i] - st.z[i];
        const double dv = st.x[i] - x_prev[i];
        psq += pv * pv;
        dsq += dv * dv;
      }
      st.primal = std::sqrt(psq);
      st.dual = cfg.mu * std::sqrt(dsq);
      const auto t1 = std::chrono::steady_clock::now();
      IterationStats is;
      is.iter = st.outer;
      is.objective = eng.plain_objective();
      is.primal = st.primal;
      is.dual = st.dual;
      is.alpha = st.alpha;
      is.beta = st.beta;
      is.inner = inner;
      is.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      is.phase = ph;
      res.history.push_back(is);
      if (st.primal < thr.eps_primal && st.dual < thr.eps_dual) {
        converged = true;
        break;
      }
    }
    if (!converged) break;  // iteration budget exhausted
  }
  res.converged = converged;
  res.beta_degenerate = eng.beta_degenerate();
  res.profile.resize(n);
  p.basis->synthesize(st.x, res.profile);
  return res;
}

}  // namespace nlos
