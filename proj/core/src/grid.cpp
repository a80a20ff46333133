#include "gfalm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gfalm/error.hpp"

namespace gfalm {

double Axis::sigma() const noexcept { return 2.0 * std::numbers::pi / length; }

GridSpec::GridSpec(std::span<const Axis> axes) {
  if (axes.empty() || axes.size() > static_cast<std::size_t>(kMaxDims))
    throw DomainError("GridSpec: dims must be 1 or 2, got " + std::to_string(axes.size()));
  dims_ = static_cast<int>(axes.size());
  size_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t d = 0; d < axes.size(); ++d) {
    const Axis& a = axes[d];
    if (a.points < 4 || a.points % 2 != 0)
      throw DomainError("GridSpec: axis " + std::to_string(d) +
                        " needs an even point count >= 4, got " + std::to_string(a.points));
    if (!(a.length > 0.0) || !std::isfinite(a.length) || !std::isfinite(a.x0))
      throw DomainError("GridSpec: axis " + std::to_string(d) + " has invalid extent");
    axes_[d] = a;
    size_ *= static_cast<std::size_t>(a.points);
    cell_volume_ *= a.h();
  }
}

GridSpec GridSpec::line(Axis axis) { return GridSpec(std::span<const Axis>(&axis, 1)); }

GridSpec GridSpec::plane(Axis first, Axis second) {
  const std::array<Axis, 2> axes{first, second};
  return GridSpec(axes);
}

double GridSpec::volume() const noexcept {
  double v = 1.0;
  for (int d = 0; d < dims_; ++d) v *= axes_[static_cast<std::size_t>(d)].length;
  return v;
}

std::array<int, GridSpec::kMaxDims> GridSpec::unflatten(std::size_t flat) const {
  if (dims_ == 1) return {static_cast<int>(flat), 0};
  const auto m1 = static_cast<std::size_t>(axes_[1].points);
  return {static_cast<int>(flat / m1), static_cast<int>(flat % m1)};
}

double GridSpec::coordinate(std::size_t flat, int d) const {
  const auto idx = unflatten(flat);
  return axis(d).coordinate(idx[static_cast<std::size_t>(d)]);
}

GridField::GridField(GridSpec grid) : grid_(grid), values_(grid_.size()) {}

GridField::GridField(GridSpec grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw DomainError("GridField: expected " + std::to_string(grid_.size()) + " values, got " +
                      std::to_string(values_.size()));
}

GridField GridField::sample(const GridSpec& grid, const std::function<Complex(double)>& f) {
  if (grid.dims() != 1) throw DomainError("GridField::sample: 1D sampler on a 2D grid");
  GridField out(grid);
  const Axis& ax = grid.axis(0);
  for (int j = 0; j < ax.points; ++j) out[static_cast<std::size_t>(j)] = f(ax.coordinate(j));
  return out;
}

GridField GridField::sample(const GridSpec& grid,
                            const std::function<Complex(double, double)>& f) {
  if (grid.dims() != 2) throw DomainError("GridField::sample: 2D sampler on a 1D grid");
  GridField out(grid);
  const Axis& a0 = grid.axis(0);
  const Axis& a1 = grid.axis(1);
  std::size_t k = 0;
  for (int i = 0; i < a0.points; ++i)
    for (int j = 0; j < a1.points; ++j) out[k++] = f(a0.coordinate(i), a1.coordinate(j));
  return out;
}

GridField GridField::constant(const GridSpec& grid, Complex value) {
  return GridField(grid, std::vector<Complex>(grid.size(), value));
}

void GridField::require_same_grid(const GridField& other) const {
  if (!(grid_ == other.grid_)) throw DomainError("GridField: grid mismatch");
}

GridField& GridField::operator+=(const GridField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridField& GridField::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

GridField& GridField::axpy(Complex s, const GridField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

bool GridField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double GridField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridField::is_real(double tol) const noexcept {
  const double bound = tol * max_abs();
  return std::all_of(values_.begin(), values_.end(),
                     [bound](const Complex& z) { return std::abs(z.imag()) <= bound; });
}

}  // namespace gfalm
