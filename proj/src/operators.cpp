#include "nlos/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nlos/simd/kernels.hpp"

namespace nlos {

namespace {

void check_span(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw std::invalid_argument(std::string(what) + " span size mismatch");
}

double base_prefactor(const SceneGeometry& g) {
  return 2.0 * std::numbers::pi * g.coherence_width * g.coherence_width /
         (g.wavelength * g.wavelength * g.distance * g.distance);
}

// 1D factor of B: exp(-ℓc²k²v²/2d²) along one axis.
double envelope_1d(const SceneGeometry& g, double v) {
  const double lk_over_d = g.coherence_width * g.wavenumber() / g.distance;
  return std::exp(-0.5 * lk_over_d * lk_over_d * v * v);
}

}  // namespace

void LinearOp::apply_cplx(std::span<const cplx> t, std::span<cplx> out) const {
  check_span(t.size(), input_size(), "input");
  check_span(out.size(), output_size(), "output");
  std::vector<double> part(t.size());
  std::vector<cplx> tmp(out.size());
  for (std::size_t i = 0; i < t.size(); ++i) part[i] = t[i].real();
  apply(part, out);
  for (std::size_t i = 0; i < t.size(); ++i) part[i] = t[i].imag();
  apply(part, tmp);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += cplx(0.0, 1.0) * tmp[i];
}

std::vector<double> LinearOp::column_norms() const {
  std::vector<double> norms(input_size());
  std::vector<double> e(input_size(), 0.0);
  std::vector<cplx> col(output_size());
  const auto& k = simd::active_kernels();
  for (std::size_t j = 0; j < input_size(); ++j) {
    e[j] = 1.0;
    apply(e, col);
    e[j] = 0.0;
    norms[j] = std::sqrt(k.wnrm2sq(col.size(), nullptr, col.data()));
  }
  return norms;
}

std::vector<cplx> LinearOp::predict(std::span<const double> t, double alpha) const {
  check_span(t.size(), input_size(), "input");
  std::vector<cplx> out(output_size());
  apply(t, out);
  const double sign = mode_sign();
  const auto b = offset();
  const double nu = has_ambient() ? alpha : 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = b[i] + sign * out[i] + nu;
  return out;
}

// ---------------------------------------------------------------------------
// IntensityOperator

IntensityOperator::IntensityOperator(const Grid2D& obj, SourceMode mode,
                                     double extension_extent, const SceneGeometry& geom,
                                     const Grid2D& wall_grid)
    : obj_(obj), wall_(wall_grid), mode_(mode) {
  scale_ = base_prefactor(geom) * obj.cell_area();
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t wnx = wall_.x.count, wny = wall_.y.count;

  // bx_ row per object column: scale · Bx(wall_x - obj_x); by_ row per object
  // row: By(wall_y - obj_y); the full scale lives in bx_ alone.
  bx_.resize(onx * wnx);
  for (std::size_t ix = 0; ix < onx; ++ix)
    for (std::size_t iwx = 0; iwx < wnx; ++iwx)
      bx_[ix * wnx + iwx] =
          scale_ * envelope_1d(geom, wall_.x.coord(iwx) - obj_.x.coord(ix));
  by_.resize(ony * wny);
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iwy = 0; iwy < wny; ++iwy)
      by_[iy * wny + iwy] = envelope_1d(geom, wall_.y.coord(iwy) - obj_.y.coord(iy));
  bxt_.resize(wnx * onx);
  for (std::size_t iwx = 0; iwx < wnx; ++iwx)
    for (std::size_t ix = 0; ix < onx; ++ix) bxt_[iwx * onx + ix] = bx_[ix * wnx + iwx];

  // Offset b: opaque mode folds the all-ones background over the extended
  // domain into separable 1D sums; reflective mode has zero offset.
  offset_.assign(wall_.size(), cplx(0.0));
  if (mode_ == SourceMode::opaque) {
    const ExtendedAxis ex = extend_axis(obj_.x, extension_extent);
    const ExtendedAxis ey = extend_axis(obj_.y, extension_extent);
    std::vector<double> sx(wnx, 0.0), sy(wny, 0.0);
    for (std::size_t iwx = 0; iwx < wnx; ++iwx)
      for (double xq : ex.coords)
        sx[iwx] += envelope_1d(geom, wall_.x.coord(iwx) - xq);
    for (std::size_t iwy = 0; iwy < wny; ++iwy)
      for (double yq : ey.coords)
        sy[iwy] += envelope_1d(geom, wall_.y.coord(iwy) - yq);
    for (std::size_t iwy = 0; iwy < wny; ++iwy)
      for (std::size_t iwx = 0; iwx < wnx; ++iwx)
        offset_[wall_.index(iwx, iwy)] = scale_ * sx[iwx] * sy[iwy];
  }
}

std::size_t IntensityOperator::input_size() const { return obj_.size(); }
std::size_t IntensityOperator::output_size() const { return wall_.size(); }
double IntensityOperator::mode_sign() const {
  return mode_ == SourceMode::opaque ? -1.0 : 1.0;
}

void IntensityOperator::apply(std::span<const double> t, std::span<cplx> out) const {
  check_span(t.size(), input_size(), "input");
  check_span(out.size(), output_size(), "output");
  const auto& k = simd::active_kernels();
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t wnx = wall_.x.count, wny = wall_.y.count;
  // stage 1: P(iy_obj, iwx) = Σ_ix t(iy_obj, ix) bx(ix, iwx)
  std::vector<double> p(ony * wnx, 0.0);
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t ix = 0; ix < onx; ++ix)
      k.axpy(wnx, t[iy * onx + ix], bx_.data() + ix * wnx, p.data() + iy * wnx);
  // stage 2: out(iwy, iwx) = Σ_iy by(iy, iwy) P(iy, iwx)
  std::vector<double> acc(wny * wnx, 0.0);
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iwy = 0; iwy < wny; ++iwy)
      k.axpy(wnx, by_[iy * wny + iwy], p.data() + iy * wnx, acc.data() + iwy * wnx);
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i];
}

void IntensityOperator::adjoint(std::span<const cplx> w, std::span<cplx> out) const {
  check_span(w.size(), output_size(), "input");
  check_span(out.size(), input_size(), "output");
  const auto& k = simd::active_kernels();
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t wnx = wall_.x.count, wny = wall_.y.count;
  // stage 1: R(iy_obj, iwx) = Σ_iwy by(iy_obj, iwy) w(iwy, iwx)
  std::vector<cplx> r(ony * wnx, cplx(0.0));
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iwy = 0; iwy < wny; ++iwy)
      k.caxpy_real(wnx, by_[iy * wny + iwy], w.data() + iwy * wnx, r.data() + iy * wnx);
  // stage 2: out(iy, ix) = Σ_iwx R(iy, iwx) bxt(iwx, ix)
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iwx = 0; iwx < wnx; ++iwx)
      k.craxpy(onx, r[iy * wnx + iwx], bxt_.data() + iwx * onx, out.data() + iy * onx);
}

std::vector<double> IntensityOperator::column_norms() const {
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t wnx = wall_.x.count, wny = wall_.y.count;
  const auto& k = simd::active_kernels();
  std::vector<double> cx(onx), cy(ony);
  for (std::size_t ix = 0; ix < onx; ++ix) cx[ix] = k.nrm2sq(wnx, bx_.data() + ix * wnx);
  for (std::size_t iy = 0; iy < ony; ++iy) cy[iy] = k.nrm2sq(wny, by_.data() + iy * wny);
  std::vector<double> norms(obj_.size());
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t ix = 0; ix < onx; ++ix)
      norms[iy * onx + ix] = std::sqrt(cx[ix] * cy[iy]);
  return norms;
}

// ---------------------------------------------------------------------------
// CoherenceOperator

CoherenceOperator::CoherenceOperator(const Grid2D& obj, SourceMode mode,
                                     double extension_extent, const SceneGeometry& geom,
                                     const WallScattering* wall, Vec2 r,
                                     const Grid2D& rho_grid, double exclusion_radius)
    : obj_(obj), rho_(rho_grid), mode_(mode), r_(r) {
  mask_ = exclusion_mask(rho_, exclusion_radius);
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) kept_.push_back(i);

  const double k = geom.wavenumber(), d = geom.distance;
  const double area = obj_.cell_area();
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t rnx = rho_.x.count, rny = rho_.y.count;

  ex_.resize(onx * rnx);
  for (std::size_t ix = 0; ix < onx; ++ix)
    for (std::size_t irx = 0; irx < rnx; ++irx)
      ex_[ix * rnx + irx] = std::polar(1.0, -k * rho_.x.coord(irx) * obj_.x.coord(ix) / d);
  ey_.resize(ony * rny);
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iry = 0; iry < rny; ++iry)
      ey_[iy * rny + iry] = std::polar(1.0, -k * rho_.y.coord(iry) * obj_.y.coord(iy) / d);

  bw_.resize(obj_.size());
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t ix = 0; ix < onx; ++ix)
      bw_[obj_.index(ix, iy)] =
          envelope_1d(geom, r_.x - obj_.x.coord(ix)) * envelope_1d(geom, r_.y - obj_.y.coord(iy));

  prefac_.resize(rho_.size());
  for (std::size_t iry = 0; iry < rny; ++iry)
    for (std::size_t irx = 0; irx < rnx; ++irx) {
      const Vec2 rho{rho_.x.coord(irx), rho_.y.coord(iry)};
      const double s = wall != nullptr ? scatter_attenuation(*wall, rho) : 1.0;
      prefac_[rho_.index(irx, iry)] = s * propagation_prefactor(geom, r_, rho) * area;
    }

  // Offset: opaque background over the extended domain as separable complex
  // 1D sums Σ_x Bx(r.x-x) e^{-ikρx x/d}; reflective mode extends with zeros.
  offset_full_.assign(rho_.size(), cplx(0.0));
  if (mode_ == SourceMode::opaque) {
    const ExtendedAxis eax = extend_axis(obj_.x, extension_extent);
    const ExtendedAxis eay = extend_axis(obj_.y, extension_extent);
    std::vector<cplx> gx(rnx, cplx(0.0)), gy(rny, cplx(0.0));
    for (std::size_t irx = 0; irx < rnx; ++irx)
      for (double xq : eax.coords)
        gx[irx] += envelope_1d(geom, r_.x - xq) *
                   std::polar(1.0, -k * rho_.x.coord(irx) * xq / d);
    for (std::size_t iry = 0; iry < rny; ++iry)
      for (double yq : eay.coords)
        gy[iry] += envelope_1d(geom, r_.y - yq) *
                   std::polar(1.0, -k * rho_.y.coord(iry) * yq / d);
    for (std::size_t iry = 0; iry < rny; ++iry)
      for (std::size_t irx = 0; irx < rnx; ++irx) {
        const std::size_t i = rho_.index(irx, iry);
        offset_full_[i] = prefac_[i] * gx[irx] * gy[iry];
      }
  }
  offset_.resize(kept_.size());
  for (std::size_t i = 0; i < kept_.size(); ++i) offset_[i] = offset_full_[kept_[i]];
}

std::size_t CoherenceOperator::input_size() const { return obj_.size(); }
std::size_t CoherenceOperator::output_size() const { return kept_.size(); }
double CoherenceOperator::mode_sign() const {
  return mode_ == SourceMode::opaque ? -1.0 : 1.0;
}

void CoherenceOperator::apply_full(std::span<const double> t, std::span<cplx> out) const {
  check_span(t.size(), input_size(), "input");
  check_span(out.size(), rho_.size(), "output");
  const auto& k = simd::active_kernels();
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t rnx = rho_.x.count, rny = rho_.y.count;
  // V = Bw ∘ t, then Γ(iry, irx) = Σ_iy ey(iy, iry) Σ_ix V(iy, ix) ex(ix, irx)
  std::vector<double> v(obj_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = bw_[i] * t[i];
  std::vector<cplx> q(ony * rnx, cplx(0.0));
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t ix = 0; ix < onx; ++ix) {
      const double w = v[iy * onx + ix];
      if (w != 0.0) k.caxpy_real(rnx, w, ex_.data() + ix * rnx, q.data() + iy * rnx);
    }
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iry = 0; iry < rny; ++iry)
      k.caxpy(rnx, ey_[iy * rny + iry], q.data() + iy * rnx, out.data() + iry * rnx);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= prefac_[i];
}

void CoherenceOperator::apply(std::span<const double> t, std::span<cplx> out) const {
  check_span(out.size(), output_size(), "output");
  std::vector<cplx> full(rho_.size());
  apply_full(t, full);
  for (std::size_t i = 0; i < kept_.size(); ++i) out[i] = full[kept_[i]];
}

void CoherenceOperator::adjoint(std::span<const cplx> w, std::span<cplx> out) const {
  check_span(w.size(), output_size(), "input");
  check_span(out.size(), input_size(), "output");
  const auto& k = simd::active_kernels();
  const std::size_t onx = obj_.x.count, ony = obj_.y.count;
  const std::size_t rnx = rho_.x.count, rny = rho_.y.count;
  // W = conj(prefac) ∘ unpack(w); out = Bw ∘ Σ conj(ey) Σ W conj(ex)
  std::vector<cplx> wf(rho_.size(), cplx(0.0));
  for (std::size_t i = 0; i < kept_.size(); ++i)
    wf[kept_[i]] = std::conj(prefac_[kept_[i]]) * w[i];
  // stage 1: M(iry, ix) = Σ_irx W(iry, irx) conj(ex(ix, irx))
  std::vector<cplx> m(rny * onx);
  for (std::size_t iry = 0; iry < rny; ++iry)
    for (std::size_t ix = 0; ix < onx; ++ix)
      m[iry * onx + ix] = k.cdotc(rnx, wf.data() + iry * rnx, ex_.data() + ix * rnx);
  // stage 2: out(iy, ix) = Bw(iy, ix) Σ_iry conj(ey(iy, iry)) M(iry, ix)
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (std::size_t iy = 0; iy < ony; ++iy)
    for (std::size_t iry = 0; iry < rny; ++iry)
      k.caxpy(onx, std::conj(ey_[iy * rny + iry]), m.data() + iry * onx,
              out.data() + iy * onx);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bw_[i];
}

std::vector<double> CoherenceOperator::column_norms() const {
  const auto& k = simd::active_kernels();
  std::vector<cplx> kept_prefac(kept_.size());
  for (std::size_t i = 0; i < kept_.size(); ++i) kept_prefac[i] = prefac_[kept_[i]];
  const double p = std::sqrt(k.wnrm2sq(kept_prefac.size(), nullptr, kept_prefac.data()));
  std::vector<double> norms(obj_.size());
  for (std::size_t j = 0; j < norms.size(); ++j) norms[j] = bw_[j] * p;
  return norms;
}

std::vector<cplx> CoherenceOperator::predict_full(std::span<const double> t) const {
  std::vector<cplx> out(rho_.size());
  apply_full(t, out);
  const double sign = mode_sign();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = offset_full_[i] + sign * out[i];
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> intensity_apply(const IntensityOperator& op,
                                    std::span<const double> t, double alpha) {
  const auto pred = op.predict(t, alpha);
  std::vector<double> out(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) out[i] = pred[i].real();
  return out;
}

std::vector<cplx> coherence_apply(const CoherenceOperator& op, std::span<const double> t) {
  return op.predict(t, 0.0);
}

std::vector<cplx> operator_adjoint_apply(const LinearOp& op, std::span<const cplx> y) {
  std::vector<cplx> out(op.input_size());
  op.adjoint(y, out);
  return out;
}

}  // namespace nlos
