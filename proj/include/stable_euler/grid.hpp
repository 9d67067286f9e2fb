#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stable_euler/stable_spec.hpp"

namespace stable_euler {

// Uniform periodic grid x_i = x_min + i dx, i = 0..n_x-1, dx = (x_max - x_min) / n_x,
// plus the list of output times (strictly increasing, positive).
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n_x, std::vector<double> times);

  static Grid1D centered(double center, double radius, std::size_t n_x, std::vector<double> times);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t n_x() const noexcept { return n_x_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  const std::vector<double>& times() const noexcept { return times_; }
  double horizon() const noexcept { return times_.back(); }

  // Index of the stored time equal to t (relative tolerance 1e-12); throws
  // std::out_of_range if t is not stored.
  std::size_t time_index(double t) const;
  bool has_time(double t) const noexcept;

  // Same nodes, different output times.
  Grid1D with_times(std::vector<double> times) const;
  // Same extent, n_x multiplied by `factor`.
  Grid1D refined(std::size_t factor) const;

  bool same_space(const Grid1D& other) const noexcept;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_x_;
  double dx_;
  std::vector<double> times_;
};

// Default grid for a density started at x0 and observed up to `horizon`:
// radius 40 horizon^{1/alpha} (20 horizon^{1/2} for alpha = 2) and the
// smallest power-of-two n_x >= 256 with 8 dx <= finest_step^{1/alpha}.
Grid1D choose_grid(const StableSpec& spec, double x0, double horizon, double finest_step, std::vector<double> times);

// A density tabulated on a Grid1D at every stored time.
//
// mass_defect[i] = 1 - dx sum_j values[i][j]. The grid is periodic, so mass
// that would leave the window re-enters on the other side; wrap_mass[i] is
// the analytic estimate of that folded mass and is kept as truncation metadata.
class GridDensity {
 public:
  GridDensity(Grid1D grid, double start_time, double origin);

  const Grid1D& grid() const noexcept { return grid_; }
  double start_time() const noexcept { return start_time_; }
  double origin() const noexcept { return origin_; }
  std::size_t n_times() const noexcept { return grid_.times().size(); }

  std::span<double> row(std::size_t time_index);
  std::span<const double> row(std::size_t time_index) const;
  std::span<const double> at_time(double t) const { return row(grid_.time_index(t)); }

  double mass_defect(std::size_t i) const { return mass_defect_.at(i); }
  double wrap_mass(std::size_t i) const { return wrap_mass_.at(i); }
  const std::vector<double>& mass_defects() const noexcept { return mass_defect_; }

  // Recomputes mass_defect for row i and stores the wrap estimate.
  void finalize_row(std::size_t i, double wrap_mass);

  // Throws MassDefectBreach if |mass_defect| > tol at any time.
  void check_mass(double tol = 1e-3) const;

  double min_value() const noexcept;

  // Every factor-th node (same extent, n_x / factor nodes); mass defects are
  // recomputed on the coarse nodes and wrap estimates carried over.
  GridDensity coarsened(std::size_t factor) const;

  // Free-form provenance (drift, scheme, tolerances ...), written to both formats.
  std::map<std::string, std::string>& metadata() noexcept { return metadata_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

  // CSV with header "t,x,value,mass_defect"; negative values are clamped to 0.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;

  // Self-describing little-endian binary: magic, version, metadata, shape, data.
  void write_binary(std::ostream& os) const;
  void write_binary(const std::string& path) const;
  static GridDensity read_binary(std::istream& is);
  static GridDensity read_binary(const std::string& path);

 private:
  Grid1D grid_;
  double start_time_;
  double origin_;
  std::vector<double> values_;
  std::vector<double> mass_defect_;
  std::vector<double> wrap_mass_;
  std::map<std::string, std::string> metadata_;
};

// Linear interpolation of a periodic grid row at an arbitrary point.
double interpolate_periodic(const Grid1D& grid, std::span<const double> row, double x);

}  // namespace stable_euler
