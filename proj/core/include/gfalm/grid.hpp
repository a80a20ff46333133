#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gfalm {

using Complex = std::complex<double>;

/// One periodic axis [x0, x0 + length) sampled at `points` equispaced nodes.
struct Axis {
  double x0 = 0.0;
  double length = 1.0;
  int points = 4;

  double h() const noexcept { return length / points; }
  double sigma() const noexcept;
  double coordinate(int j) const noexcept { return x0 + j * h(); }

  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Uniform periodic tensor grid in one or two dimensions.
///
/// Values on the grid are stored axis-major with the last axis fastest, so a
/// 2D index (i, j) maps to i * M_1 + j.
class GridSpec {
 public:
  static constexpr int kMaxDims = 2;

  /// Throws DomainError unless every axis has even M >= 4 and positive length.
  explicit GridSpec(std::span<const Axis> axes);
  static GridSpec line(Axis axis);
  static GridSpec plane(Axis first, Axis second);

  int dims() const noexcept { return dims_; }
  const Axis& axis(int d) const { return axes_.at(static_cast<std::size_t>(d)); }
  std::size_t size() const noexcept { return size_; }
  /// Product of the per-axis steps; the weight of the discrete inner product.
  double cell_volume() const noexcept { return cell_volume_; }
  /// Product of the per-axis lengths.
  double volume() const noexcept;

  /// Physical coordinate of flat index `flat` along axis `d`.
  double coordinate(std::size_t flat, int d) const;
  /// Per-axis integer index of flat index `flat`.
  std::array<int, kMaxDims> unflatten(std::size_t flat) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    if (a.dims_ != b.dims_) return false;
    for (int d = 0; d < a.dims_; ++d)
      if (!(a.axes_[static_cast<std::size_t>(d)] == b.axes_[static_cast<std::size_t>(d)]))
        return false;
    return true;
  }

 private:
  std::array<Axis, kMaxDims> axes_{};
  int dims_ = 0;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

/// Complex samples of a function on a GridSpec.
class GridField {
 public:
  explicit GridField(GridSpec grid);
  GridField(GridSpec grid, std::vector<Complex> values);

  /// Samples f(x) in 1D or f(x1, x2) in 2D at every node.
  static GridField sample(const GridSpec& grid, const std::function<Complex(double)>& f);
  static GridField sample(const GridSpec& grid,
                          const std::function<Complex(double, double)>& f);
  static GridField constant(const GridSpec& grid, Complex value);

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  GridField& operator+=(const GridField& other);
  GridField& operator-=(const GridField& other);
  GridField& operator*=(Complex s);
  GridField& operator*=(double s);

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(GridField a, double s) { return a *= s; }
  friend GridField operator*(double s, GridField a) { return a *= s; }
  friend GridField operator*(Complex s, GridField a) { return a *= s; }
  friend GridField operator*(GridField a, Complex s) { return a *= s; }

  /// this += s * other
  GridField& axpy(Complex s, const GridField& other);

  bool all_finite() const noexcept;
  /// True when every imaginary part is at most `tol` times the max modulus.
  bool is_real(double tol = 0.0) const noexcept;
  double max_abs() const noexcept;

  /// Throws DomainError when `other` lives on a different grid.
  void require_same_grid(const GridField& other) const;

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
};

}  // namespace gfalm
