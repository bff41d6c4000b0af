#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "conelab/multipliers.hpp"

namespace conelab {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 8;

/// Periodic box [-L/2, L/2)^n sampled at N points per axis.
///
/// Physical samples sit at x = L((k + o)/N - 1/2), o = 0 or 1/2 (half-cell
/// offset, which keeps samples off the coordinate planes).  Dual frequencies
/// are xi = m/L, m in [-N/2, N/2).  Storage is axis-major: the last axis
/// (the distinguished x_n / xi_n) varies fastest.
///
/// Transform convention, on either kind of grid:
///   fhat(xi_m) = h^n sum_k f(x_k) exp(-2 pi i x_k . xi_m),     h = L/N
///   f(x_k)     = L^{-n} sum_m fhat(xi_m) exp(2 pi i x_k . xi_m)
/// so h^n sum |f|^2 = L^{-n} sum |fhat|^2 exactly.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double box_length, bool half_offset = false);

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  double box_length() const { return L_; }
  bool half_offset() const { return offset_; }
  std::size_t size() const { return size_; }

  double spacing() const { return L_ / n_; }
  double cell_volume() const;
  double freq_spacing() const { return 1.0 / L_; }
  double lattice_measure() const;
  double nyquist() const { return n_ / (2.0 * L_); }

  double coord(int k) const { return L_ * ((k + (offset_ ? 0.5 : 0.0)) / n_ - 0.5); }
  double freq(int j) const { return (j - n_ / 2) / L_; }

  void decode(std::size_t idx, int* k) const;
  std::size_t encode(const int* k) const;
  void point(std::size_t idx, double* x) const;
  void frequency(std::size_t idx, double* xi) const;

  Grid with_offset(bool half_offset) const { return Grid(dim_, n_, L_, half_offset); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.L_ == b.L_ && a.offset_ == b.offset_;
  }

 private:
  int dim_;
  int n_;
  double L_;
  bool offset_;
  std::size_t size_;
};

Grid make_grid(int dim, int points_per_axis, double box_length, bool half_offset = false);

/// Cap on the bytes of one complex array (N^n * 16); default 2 GiB.
void set_memory_cap(std::size_t bytes);
std::size_t memory_cap();

class Field {
 public:
  explicit Field(const Grid& g);
  Field(const Grid& g, std::vector<cplx> samples);

  static Field from_function(const Grid& g, const std::function<cplx(const double*)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> samples() const { return data_; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  /// Moves the sample buffer out (the field is left empty).
  std::vector<cplx> release() { return std::move(data_); }

 private:
  Grid grid_;
  std::vector<cplx> data_;
};

class Spectrum {
 public:
  explicit Spectrum(const Grid& g);
  Spectrum(const Grid& g, std::vector<cplx> coeffs);

  static Spectrum from_function(const Grid& g, const std::function<cplx(const double*)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> coeffs() const { return data_; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  std::vector<cplx> release() { return std::move(data_); }

 private:
  Grid grid_;
  std::vector<cplx> data_;
};

struct SpectralMask {
  Grid grid;
  std::vector<double> values;
  MultiplierSpec spec;
  double dilation;
};

Spectrum forward_transform(const Field& f);
Field inverse_transform(const Spectrum& s);
/// inverse_transform of the spectrum holding coeffs at idx and zero elsewhere;
/// empty planes of the last axis are skipped.
Field inverse_transform_sparse(const Grid& g, std::span<const std::size_t> idx, std::span<const cplx> coeffs);
/// Leaves in work (resized to the grid) samples whose moduli equal those of
/// inverse_transform_sparse; the per-point unimodular phases are not applied.
void inverse_transform_sparse_moduli(const Grid& g, std::span<const std::size_t> idx, std::span<const cplx> coeffs,
                                     std::vector<cplx>& work);

/// Mask of spec at (t^{-1} xi', xi_n) on every lattice point.  Families with
/// compact support must fit under the Nyquist frequency after dilation.
/// Throws GeometryError when a compactly supported family, dilated by t,
/// does not fit under the Nyquist frequency of grid.
void check_nyquist(const MultiplierSpec& spec, const Grid& grid, double t);

SpectralMask eval_mask(const MultiplierSpec& spec, const Grid& grid, double t);
Spectrum apply_mask(const Spectrum& s, const SpectralMask& mask);

Field synthesize_mode(const Grid& grid, std::span<const double> xi0, cplx amplitude);

/// Lattice resolution check 1/L <= delta/8 used by collar-scale routines.
void require_collar_resolution(const Grid& grid, double delta, const char* who);

// Pointwise helpers shared by the operator modules.
double l2_norm(const Field& f);
double l2_norm(const Spectrum& s);
double max_abs(const Field& f);
double max_abs_diff(const Field& a, const Field& b);
Field add(const Field& a, const Field& b);
Field subtract(const Field& a, const Field& b);
Field scale(const Field& a, cplx c);

}  // namespace conelab
