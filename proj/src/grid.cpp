#include "conelab/grid.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "conelab/errors.hpp"

namespace conelab {

namespace {

std::atomic<std::size_t> g_cap{std::size_t(2) << 30};

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::mutex g_plan_mu;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

fftw_plan get_plan(int dim, int n, int sign) {
  std::lock_guard lk(g_plan_mu);
  auto key = std::make_tuple(dim, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::size_t total = 1;
  int dims[kMaxDim];
  for (int a = 0; a < dim; ++a) {
    dims[a] = n;
    total *= n;
  }
  auto* buf = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!p) throw ResourceError("fftw: plan creation failed");
  g_plans.emplace(key, p);
  return p;
}

// Pruned pieces of an inverse transform: the first dim-1 axes of one plane
// (strided by n) and all rows along the last axis.
enum class Part { Plane = 1, Rows = 2 };

fftw_plan get_part_plan(int dim, int n, Part part) {
  std::lock_guard lk(g_plan_mu);
  auto key = std::make_tuple(dim, n, 10 + int(part));
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n;
  auto* buf = fftw_alloc_complex(total);
  fftw_plan p = nullptr;
  if (part == Part::Plane) {
    fftw_iodim dims[kMaxDim];
    int stride = n;
    for (int a = dim - 2; a >= 0; --a) {
      dims[a] = {n, stride, stride};
      stride *= n;
    }
    p = fftw_plan_guru_dft(dim - 1, dims, 0, nullptr, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  } else {
    const int rows = int(total / n);
    p = fftw_plan_many_dft(1, &n, rows, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_free(buf);
  if (!p) throw ResourceError("fftw: plan creation failed");
  g_plans.emplace(key, p);
  return p;
}

void run_fft(const Grid& g, std::vector<cplx>& data, int sign) {
  fftw_plan p = get_plan(g.dim(), g.points_per_axis(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

// Applies prod_a phase[k_a] over all axes, in place.
void apply_axis_phases(const Grid& g, std::vector<cplx>& data, const std::vector<cplx>& phase) {
  const int n = g.points_per_axis();
  const std::size_t outer = g.size() / n;
  int k[kMaxDim];
  for (std::size_t o = 0; o < outer; ++o) {
    g.decode(o * n, k);
    cplx f = 1.0;
    for (int a = 0; a + 1 < g.dim(); ++a) f *= phase[k[a]];
    cplx* row = data.data() + o * n;
    for (int j = 0; j < n; ++j) row[j] *= f * phase[j];
  }
}

void check_finite(std::span<const cplx> v, const char* who) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ArgumentError(std::string(who) + ": non-finite value");
}

}  // namespace

void set_memory_cap(std::size_t bytes) { g_cap = bytes; }
std::size_t memory_cap() { return g_cap; }

Grid::Grid(int dim, int points_per_axis, double box_length, bool half_offset)
    : dim_(dim), n_(points_per_axis), L_(box_length), offset_(half_offset) {
  if (dim < 1 || dim > kMaxDim) throw ArgumentError("grid: dim must lie in [1, 8]");
  if (!is_pow2(points_per_axis) || points_per_axis < 8)
    throw ArgumentError("grid: points_per_axis must be a power of two >= 8, got " +
                        std::to_string(points_per_axis));
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw ArgumentError("grid: box_length must be positive");
  double total = 1.0;
  for (int a = 0; a < dim; ++a) total *= points_per_axis;
  const double bytes = total * sizeof(cplx);
  if (bytes > double(memory_cap()))
    throw ResourceError("grid: " + std::to_string(points_per_axis) + "^" + std::to_string(dim) +
                        " samples need " + std::to_string(std::llround(bytes)) +
                        " bytes per array, above the cap of " + std::to_string(memory_cap()));
  size_ = std::size_t(total);
}

Grid make_grid(int dim, int points_per_axis, double box_length, bool half_offset) {
  return Grid(dim, points_per_axis, box_length, half_offset);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }
double Grid::lattice_measure() const { return std::pow(1.0 / L_, dim_); }

void Grid::decode(std::size_t idx, int* k) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = int(idx % n_);
    idx /= n_;
  }
}

std::size_t Grid::encode(const int* k) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) idx = idx * n_ + std::size_t(k[a]);
  return idx;
}

void Grid::point(std::size_t idx, double* x) const {
  int k[kMaxDim];
  decode(idx, k);
  for (int a = 0; a < dim_; ++a) x[a] = coord(k[a]);
}

void Grid::frequency(std::size_t idx, double* xi) const {
  int k[kMaxDim];
  decode(idx, k);
  for (int a = 0; a < dim_; ++a) xi[a] = freq(k[a]);
}

Field::Field(const Grid& g) : grid_(g), data_(g.size()) {}

Field::Field(const Grid& g, std::vector<cplx> samples) : grid_(g), data_(std::move(samples)) {
  if (data_.size() != g.size()) throw ArgumentError("field: sample count does not match grid");
  check_finite(data_, "field");
}

Field Field::from_function(const Grid& g, const std::function<cplx(const double*)>& f) {
  std::vector<cplx> v(g.size());
  double x[kMaxDim];
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.point(i, x);
    v[i] = f(x);
  }
  return Field(g, std::move(v));
}

Spectrum::Spectrum(const Grid& g) : grid_(g), data_(g.size()) {}

Spectrum::Spectrum(const Grid& g, std::vector<cplx> coeffs) : grid_(g), data_(std::move(coeffs)) {
  if (data_.size() != g.size()) throw ArgumentError("spectrum: coefficient count does not match grid");
  check_finite(data_, "spectrum");
}

Spectrum Spectrum::from_function(const Grid& g, const std::function<cplx(const double*)>& f) {
  std::vector<cplx> v(g.size());
  double xi[kMaxDim];
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.frequency(i, xi);
    v[i] = f(xi);
  }
  return Spectrum(g, std::move(v));
}

Spectrum forward_transform(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.points_per_axis();
  const double o = g.half_offset() ? 0.5 : 0.0;
  std::vector<cplx> pre(n), post(n);
  const cplx shift = std::polar(1.0, std::numbers::pi * o);
  for (int j = 0; j < n; ++j) {
    pre[j] = (j % 2) ? -1.0 : 1.0;
    post[j] = pre[j] * std::polar(1.0, -2.0 * std::numbers::pi * o * j / n) * shift;
  }
  std::vector<cplx> data(f.samples().begin(), f.samples().end());
  apply_axis_phases(g, data, pre);
  run_fft(g, data, FFTW_FORWARD);
  const double hn = g.cell_volume();
  for (auto& p : post) p *= std::pow(hn, 1.0 / g.dim());
  apply_axis_phases(g, data, post);
  return Spectrum(g, std::move(data));
}

Field inverse_transform(const Spectrum& s) {
  const Grid& g = s.grid();
  const int n = g.points_per_axis();
  const double o = g.half_offset() ? 0.5 : 0.0;
  std::vector<cplx> pre(n), post(n);
  const cplx shift = std::polar(1.0, -std::numbers::pi * o);
  const double inv_l = 1.0 / g.box_length();
  for (int j = 0; j < n; ++j) {
    post[j] = (j % 2) ? -1.0 : 1.0;
    pre[j] = post[j] * std::polar(1.0, 2.0 * std::numbers::pi * o * j / n) * shift * inv_l;
  }
  std::vector<cplx> data(s.coeffs().begin(), s.coeffs().end());
  apply_axis_phases(g, data, pre);
  run_fft(g, data, FFTW_BACKWARD);
  apply_axis_phases(g, data, post);
  return Field(g, std::move(data));
}

namespace {

std::vector<cplx> inverse_post_phase(const Grid& g) {
  std::vector<cplx> post(g.points_per_axis());
  for (int j = 0; j < g.points_per_axis(); ++j) post[j] = (j % 2) ? -1.0 : 1.0;
  return post;
}

}  // namespace

void inverse_transform_sparse_moduli(const Grid& g, std::span<const std::size_t> idx, std::span<const cplx> coeffs,
                                     std::vector<cplx>& work) {
  if (idx.size() != coeffs.size()) throw ArgumentError("inverse_transform_sparse: size mismatch");
  const int n = g.points_per_axis();
  const double o = g.half_offset() ? 0.5 : 0.0;
  std::vector<cplx> pre(n);
  const cplx shift = std::polar(1.0, -std::numbers::pi * o);
  const double inv_l = 1.0 / g.box_length();
  for (int j = 0; j < n; ++j)
    pre[j] = ((j % 2) ? -1.0 : 1.0) * std::polar(1.0, 2.0 * std::numbers::pi * o * j / n) * shift * inv_l;
  work.resize(g.size());
  std::fill(work.begin(), work.end(), cplx(0.0));
  std::vector<char> plane(n, 0);
  int k[kMaxDim];
  for (std::size_t q = 0; q < idx.size(); ++q) {
    if (idx[q] >= g.size()) throw ArgumentError("inverse_transform_sparse: index out of range");
    g.decode(idx[q], k);
    cplx f = coeffs[q];
    for (int a = 0; a < g.dim(); ++a) f *= pre[k[a]];
    work[idx[q]] += f;
    plane[k[g.dim() - 1]] = 1;
  }
  auto* base = reinterpret_cast<fftw_complex*>(work.data());
  if (g.dim() == 1) {
    run_fft(g, work, FFTW_BACKWARD);
    return;
  }
  fftw_plan p = get_part_plan(g.dim(), n, Part::Plane);
  for (int j = 0; j < n; ++j)
    if (plane[j]) fftw_execute_dft(p, base + j, base + j);
  fftw_execute_dft(get_part_plan(g.dim(), n, Part::Rows), base, base);
}

Field inverse_transform_sparse(const Grid& g, std::span<const std::size_t> idx, std::span<const cplx> coeffs) {
  std::vector<cplx> data;
  inverse_transform_sparse_moduli(g, idx, coeffs, data);
  apply_axis_phases(g, data, inverse_post_phase(g));
  return Field(g, std::move(data));
}

void check_nyquist(const MultiplierSpec& spec, const Grid& grid, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("eval_mask: dilation t must be positive");
  spec.validate();
  const double radius = spec.support_radius(t);
  if (radius > 0.0 && radius > grid.nyquist()) {
    const double need_n = std::ceil(2.0 * radius * grid.box_length());
    throw GeometryError("eval_mask: " + family_name(spec.family) + " support radius " +
                        std::to_string(radius) + " exceeds Nyquist " + std::to_string(grid.nyquist()) +
                        "; need N >= " + std::to_string(std::llround(need_n)) + " or L <= " +
                        std::to_string(grid.points_per_axis() / (2.0 * radius)));
  }
}

SpectralMask eval_mask(const MultiplierSpec& spec, const Grid& grid, double t) {
  check_nyquist(spec, grid, t);
  SpectralMask m{grid, std::vector<double>(grid.size()), spec, t};
  double xi[kMaxDim];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.frequency(i, xi);
    m.values[i] = multipliers::eval_dilated(spec, std::span<const double>(xi, grid.dim()), t);
  }
  return m;
}

Spectrum apply_mask(const Spectrum& s, const SpectralMask& mask) {
  if (!(s.grid() == mask.grid)) throw ArgumentError("apply_mask: grid mismatch");
  std::vector<cplx> out(s.coeffs().begin(), s.coeffs().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask.values[i];
  return Spectrum(s.grid(), std::move(out));
}

Field synthesize_mode(const Grid& grid, std::span<const double> xi0, cplx amplitude) {
  if (int(xi0.size()) != grid.dim()) throw ArgumentError("synthesize_mode: dimension mismatch");
  const int n = grid.points_per_axis();
  for (double v : xi0) {
    const double m = v * grid.box_length();
    if (std::abs(m - std::round(m)) > 1e-9 || std::round(m) < -n / 2 || std::round(m) > n / 2 - 1)
      throw ArgumentError("synthesize_mode: frequency is not on the dual lattice");
  }
  std::vector<double> f(xi0.begin(), xi0.end());
  return Field::from_function(grid, [&](const double* x) {
    double ph = 0.0;
    for (int a = 0; a < grid.dim(); ++a) ph += x[a] * f[a];
    return amplitude * std::polar(1.0, 2.0 * std::numbers::pi * ph);
  });
}

void require_collar_resolution(const Grid& grid, double delta, const char* who) {
  if (grid.freq_spacing() > delta / 8.0)
    throw ResolutionError(std::string(who) + ": lattice spacing 1/L = " + std::to_string(grid.freq_spacing()) +
                          " exceeds delta/8; need L >= " + std::to_string(8.0 / delta));
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (const auto& z : f.samples()) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_volume());
}

double l2_norm(const Spectrum& s) {
  double a = 0.0;
  for (const auto& z : s.coeffs()) a += std::norm(z);
  return std::sqrt(a * s.grid().lattice_measure());
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& z : f.samples()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ArgumentError("max_abs_diff: grid mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field add(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ArgumentError("add: grid mismatch");
  std::vector<cplx> v(a.grid().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return Field(a.grid(), std::move(v));
}

Field subtract(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ArgumentError("subtract: grid mismatch");
  std::vector<cplx> v(a.grid().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return Field(a.grid(), std::move(v));
}

Field scale(const Field& a, cplx c) {
  std::vector<cplx> v(a.samples().begin(), a.samples().end());
  for (auto& z : v) z *= c;
  return Field(a.grid(), std::move(v));
}

}  // namespace conelab
