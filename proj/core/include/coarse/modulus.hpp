#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace coarse::extend {

// m * 2^e with m in [0.5, 1), for budgets far below the double range.
struct ExtendedReal {
  double mantissa = 0.0;
  std::int64_t exponent = 0;

  static ExtendedReal from(double v);
  double to_double() const;  // 0 when below the double range
  double log10() const;
  bool less_than(double v) const;
};

// The budget function E: an (E(x), E(x))-Lipschitz input is assumed to
// extend to an (x, x)-Lipschitz output.
class Modulus {
 public:
  enum class Kind { paper, linear, table };

  // E(x) = x^2 / (32 + 7x).
  static Modulus paper();
  // E(x) = x / c with c > 1.
  static Modulus linear(double c);
  // Step function through (x_k, E_k): E(x) = E_k for the largest x_k <= x.
  // Keys strictly increasing and positive, values non-decreasing with
  // 0 < E_k < x_k.
  static Modulus table(std::vector<std::pair<double, double>> points);

  Kind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }
  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

  // Throws ModulusDomain below the smallest table key.
  double operator()(double x) const;
  ExtendedReal apply(ExtendedReal x) const;
  // E^k(x); E^0 is the identity.
  ExtendedReal compose(double x, std::uint64_t k) const;

  // "paper", "linear:<c>" or "table".
  std::string describe() const;

 private:
  Kind kind_ = Kind::paper;
  double c_ = 0.0;
  std::vector<std::pair<double, double>> points_;
};

Modulus default_modulus();

}  // namespace coarse::extend
