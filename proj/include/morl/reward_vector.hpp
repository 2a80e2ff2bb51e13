#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace morl {

/// Per-objective return vector. One entry per objective; the owning
/// environment fixes the length.
class RewardVector {
 public:
  RewardVector() = default;
  explicit RewardVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
  RewardVector(std::initializer_list<double> values) : values_(values) {}
  explicit RewardVector(std::vector<double> values) : values_(std::move(values)) {}

  static RewardVector zeros(std::size_t n) { return RewardVector(n, 0.0); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  std::span<const double> view() const noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool is_finite() const noexcept;
  bool is_zero() const noexcept;

  RewardVector& operator+=(const RewardVector& other);
  RewardVector& operator-=(const RewardVector& other);
  RewardVector& operator*=(double scale);

  /// this += scale * other, component by component.
  void add_scaled(const RewardVector& other, double scale);

  friend RewardVector operator+(RewardVector lhs, const RewardVector& rhs) { return lhs += rhs; }
  friend RewardVector operator-(RewardVector lhs, const RewardVector& rhs) { return lhs -= rhs; }
  friend RewardVector operator*(RewardVector lhs, double scale) { return lhs *= scale; }
  friend RewardVector operator*(double scale, RewardVector rhs) { return rhs *= scale; }

  friend bool operator==(const RewardVector&, const RewardVector&) = default;
  friend std::partial_ordering operator<=>(const RewardVector& lhs, const RewardVector& rhs) {
    return lhs.values_ <=> rhs.values_;
  }

  /// "(7,-1,-5)" using shortest round-trip formatting.
  std::string to_string() const;

 private:
  std::vector<double> values_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace morl
