#include "stable_euler/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "stable_euler/errors.hpp"

namespace stable_euler {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_x, std::vector<double> times)
    : x_min_(x_min), x_max_(x_max), n_x_(n_x), dx_((x_max - x_min) / static_cast<double>(n_x)), times_(std::move(times)) {
  if (!(x_max > x_min)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
  if (n_x < 256 || n_x % 2 != 0) throw std::invalid_argument("Grid1D: n_x must be even and >= 256");
  if (times_.empty()) throw std::invalid_argument("Grid1D: at least one output time is required");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > 0.0) || (i > 0 && !(times_[i] > times_[i - 1]))) {
      throw std::invalid_argument("Grid1D: output times must be positive and strictly increasing");
    }
  }
}

Grid1D Grid1D::centered(double center, double radius, std::size_t n_x, std::vector<double> times) {
  return Grid1D(center - radius, center + radius, n_x, std::move(times));
}

std::size_t Grid1D::time_index(double t) const {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (std::abs(times_[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  }
  throw std::out_of_range("Grid1D: time " + std::to_string(t) + " is not stored");
}

bool Grid1D::has_time(double t) const noexcept {
  return std::any_of(times_.begin(), times_.end(),
                     [t](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
}

Grid1D Grid1D::with_times(std::vector<double> times) const { return Grid1D(x_min_, x_max_, n_x_, std::move(times)); }

Grid1D Grid1D::refined(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("Grid1D::refined: factor must be positive");
  return Grid1D(x_min_, x_max_, n_x_ * factor, times_);
}

bool Grid1D::same_space(const Grid1D& other) const noexcept {
  return n_x_ == other.n_x_ && std::abs(x_min_ - other.x_min_) <= 1e-12 * std::max(1.0, std::abs(x_min_)) &&
         std::abs(x_max_ - other.x_max_) <= 1e-12 * std::max(1.0, std::abs(x_max_));
}

Grid1D choose_grid(const StableSpec& spec, double x0, double horizon, double finest_step, std::vector<double> times) {
  if (!(horizon > 0.0 && finest_step > 0.0)) throw std::invalid_argument("choose_grid: horizon and step must be positive");
  const double radius = spec.gaussian() ? 20.0 * std::sqrt(horizon) : 40.0 * spec.scale(horizon);
  const double max_dx = spec.scale(finest_step) / 8.0;
  const auto needed = static_cast<std::uint64_t>(std::ceil(2.0 * radius / max_dx));
  const std::size_t n_x = std::max<std::size_t>(256, std::bit_ceil(needed));
  return Grid1D::centered(x0, radius, n_x, std::move(times));
}

GridDensity::GridDensity(Grid1D grid, double start_time, double origin)
    : grid_(std::move(grid)),
      start_time_(start_time),
      origin_(origin),
      values_(grid_.times().size() * grid_.n_x(), 0.0),
      mass_defect_(grid_.times().size(), 1.0),
      wrap_mass_(grid_.times().size(), 0.0) {
  if (!(grid_.times().front() > start_time)) throw std::invalid_argument("GridDensity: output times must follow the start time");
}

std::span<double> GridDensity::row(std::size_t i) {
  if (i >= n_times()) throw std::out_of_range("GridDensity::row");
  return {values_.data() + i * grid_.n_x(), grid_.n_x()};
}

std::span<const double> GridDensity::row(std::size_t i) const {
  if (i >= n_times()) throw std::out_of_range("GridDensity::row");
  return {values_.data() + i * grid_.n_x(), grid_.n_x()};
}

void GridDensity::finalize_row(std::size_t i, double wrap_mass) {
  double mass = 0.0;
  for (double v : row(i)) mass += v;
  mass_defect_.at(i) = 1.0 - mass * grid_.dx();
  wrap_mass_.at(i) = wrap_mass;
}

GridDensity GridDensity::coarsened(std::size_t factor) const {
  if (factor == 0 || grid_.n_x() % factor != 0) throw std::invalid_argument("GridDensity::coarsened: factor must divide n_x");
  GridDensity out(Grid1D(grid_.x_min(), grid_.x_max(), grid_.n_x() / factor, grid_.times()), start_time_, origin_);
  for (std::size_t i = 0; i < n_times(); ++i) {
    const auto src = row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = src[j * factor];
    out.finalize_row(i, wrap_mass_[i]);
  }
  out.metadata_ = metadata_;
  return out;
}

void GridDensity::check_mass(double tol) const {
  for (std::size_t i = 0; i < n_times(); ++i) {
    if (!(std::abs(mass_defect_[i]) <= tol)) {
      std::ostringstream os;
      os << "mass defect " << mass_defect_[i] << " at t = " << grid_.times()[i] << " exceeds " << tol;
      throw MassDefectBreach(os.str());
    }
  }
}

double GridDensity::min_value() const noexcept {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

void GridDensity::write_csv(std::ostream& os) const {
  os << "t,x,value,mass_defect\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < n_times(); ++i) {
    const auto r = row(i);
    for (std::size_t j = 0; j < grid_.n_x(); ++j) {
      os << grid_.times()[i] << ',' << grid_.x(j) << ',' << std::max(0.0, r[j]) << ',' << mass_defect_[i] << '\n';
    }
  }
}

void GridDensity::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(os);
}

namespace {

constexpr char kMagic[8] = {'S', 'E', 'G', 'R', 'I', 'D', 'D', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  static_assert(std::endian::native == std::endian::little, "binary format assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("GridDensity: truncated binary stream");
  return v;
}

void put_string(std::ostream& os, const std::string& s) {
  put<std::uint64_t>(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& is) {
  const auto n = get<std::uint64_t>(is);
  if (n > (1U << 20)) throw std::runtime_error("GridDensity: implausible string length in binary stream");
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw std::runtime_error("GridDensity: truncated binary stream");
  return s;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& is, std::size_t n) {
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw std::runtime_error("GridDensity: truncated binary stream");
  return v;
}

}  // namespace

void GridDensity::write_binary(std::ostream& os) const {
  os.write(kMagic, sizeof kMagic);
  put(os, kVersion);
  put<std::uint64_t>(os, metadata_.size());
  for (const auto& [k, v] : metadata_) {
    put_string(os, k);
    put_string(os, v);
  }
  put(os, grid_.x_min());
  put(os, grid_.x_max());
  put<std::uint64_t>(os, grid_.n_x());
  put<std::uint64_t>(os, n_times());
  put(os, start_time_);
  put(os, origin_);
  put_doubles(os, grid_.times());
  put_doubles(os, mass_defect_);
  put_doubles(os, wrap_mass_);
  put_doubles(os, values_);
  if (!os) throw std::runtime_error("GridDensity: write failed");
}

void GridDensity::write_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_binary(os);
}

GridDensity GridDensity::read_binary(std::istream& is) {
  char magic[sizeof kMagic];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw std::runtime_error("GridDensity: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("GridDensity: unsupported version");
  std::map<std::string, std::string> meta;
  const auto n_meta = get<std::uint64_t>(is);
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    auto k = get_string(is);
    meta[k] = get_string(is);
  }
  const auto x_min = get<double>(is);
  const auto x_max = get<double>(is);
  const auto n_x = get<std::uint64_t>(is);
  const auto n_t = get<std::uint64_t>(is);
  const auto start = get<double>(is);
  const auto origin = get<double>(is);
  if (n_x > (1ULL << 28) || n_t > (1ULL << 20)) throw std::runtime_error("GridDensity: implausible shape");
  auto times = get_doubles(is, n_t);
  GridDensity out(Grid1D(x_min, x_max, n_x, std::move(times)), start, origin);
  out.mass_defect_ = get_doubles(is, n_t);
  out.wrap_mass_ = get_doubles(is, n_t);
  out.values_ = get_doubles(is, n_t * n_x);
  out.metadata_ = std::move(meta);
  return out;
}

GridDensity GridDensity::read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_binary(is);
}

double interpolate_periodic(const Grid1D& grid, std::span<const double> row, double x) {
  if (row.size() != grid.n_x()) throw GridMismatch("interpolate_periodic: row length differs from grid");
  const double n = static_cast<double>(grid.n_x());
  double pos = (x - grid.x_min()) / grid.dx();
  pos -= n * std::floor(pos / n);
  const auto i = static_cast<std::size_t>(pos) % grid.n_x();
  const double frac = pos - std::floor(pos);
  const std::size_t j = (i + 1) % grid.n_x();
  return (1.0 - frac) * row[i] + frac * row[j];
}

}  // namespace stable_euler
