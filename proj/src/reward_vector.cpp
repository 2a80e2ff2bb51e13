#include "morl/reward_vector.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace morl {

bool RewardVector::is_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool RewardVector::is_zero() const noexcept {
  for (double v : values_) {
    if (v != 0.0) return false;
  }
  return true;
}

RewardVector& RewardVector::operator+=(const RewardVector& other) {
  if (other.size() != size()) throw std::invalid_argument("reward vector length mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RewardVector& RewardVector::operator-=(const RewardVector& other) {
  if (other.size() != size()) throw std::invalid_argument("reward vector length mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RewardVector& RewardVector::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

void RewardVector::add_scaled(const RewardVector& other, double scale) {
  if (other.size() != size()) throw std::invalid_argument("reward vector length mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
}

std::string RewardVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values_[i]);
  }
  out += ')';
  return out;
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // also folds -0
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

}  // namespace morl
