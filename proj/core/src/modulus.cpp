#include "coarse/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coarse/error.hpp"

namespace coarse::extend {

namespace {

// Below this exponent the 7x term of the paper modulus is invisible next to 32.
constexpr std::int64_t kTinyExponent = -1000;

ExtendedReal normalized(double m, std::int64_t e) {
  if (m == 0.0) return {0.0, 0};
  int shift = 0;
  const double mm = std::frexp(m, &shift);
  return {mm, e + shift};
}

}  // namespace

ExtendedReal ExtendedReal::from(double v) { return normalized(v, 0); }

double ExtendedReal::to_double() const {
  if (mantissa == 0.0 || exponent < -1100) return 0.0;
  return std::ldexp(mantissa, static_cast<int>(exponent));
}

double ExtendedReal::log10() const {
  return std::log10(mantissa) + static_cast<double>(exponent) * std::log10(2.0);
}

bool ExtendedReal::less_than(double v) const {
  const ExtendedReal o = from(v);
  if (mantissa == 0.0) return o.mantissa > 0.0;
  if (exponent != o.exponent) return exponent < o.exponent;
  return mantissa < o.mantissa;
}

Modulus Modulus::paper() { return Modulus{}; }

Modulus Modulus::linear(double c) {
  if (!(c > 1.0) || !std::isfinite(c))
    throw Error(Errc::BadParams, "linear modulus needs c > 1");
  Modulus m;
  m.kind_ = Kind::linear;
  m.c_ = c;
  return m;
}

Modulus Modulus::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw Error(Errc::BadParams, "modulus table is empty");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [x, e] = points[i];
    if (!(x > 0.0) || !(e > 0.0) || !(e < x) || !std::isfinite(x))
      throw Error(Errc::BadParams, "modulus table entry " + std::to_string(i) +
                                       " must satisfy 0 < E < x");
    if (i > 0 && !(x > points[i - 1].first))
      throw Error(Errc::BadParams, "modulus table keys must increase");
    if (i > 0 && e < points[i - 1].second)
      throw Error(Errc::BadParams, "modulus table values must not decrease");
  }
  Modulus m;
  m.kind_ = Kind::table;
  m.points_ = std::move(points);
  return m;
}

double Modulus::operator()(double x) const { return apply(ExtendedReal::from(x)).to_double(); }

ExtendedReal Modulus::apply(ExtendedReal x) const {
  switch (kind_) {
    case Kind::paper: {
      // squared in extended form; 7x vanishes next to 32 once x is tiny
      const double denom = x.exponent > kTinyExponent ? 32.0 + 7.0 * x.to_double() : 32.0;
      return normalized(x.mantissa * x.mantissa / denom, 2 * x.exponent);
    }
    case Kind::linear:
      return normalized(x.mantissa / c_, x.exponent);
    case Kind::table: {
      if (x.less_than(points_.front().first)) {
        std::ostringstream os;
        os << "modulus table starts at " << points_.front().first << ", asked for 10^"
           << x.log10();
        throw Error(Errc::ModulusDomain, os.str());
      }
      const double v = x.to_double();
      auto it = std::upper_bound(points_.begin(), points_.end(), v,
                                 [](double key, const auto& p) { return key < p.first; });
      return ExtendedReal::from(std::prev(it)->second);
    }
  }
  return x;
}

ExtendedReal Modulus::compose(double x, std::uint64_t k) const {
  ExtendedReal v = ExtendedReal::from(x);
  if (kind_ == Kind::linear && k > 4096) {
    const double l = std::log2(x) - static_cast<double>(k) * std::log2(c_);
    const double e = std::floor(l) + 1.0;
    return normalized(std::exp2(l - e), static_cast<std::int64_t>(e));
  }
  for (std::uint64_t i = 0; i < k; ++i) {
    v = apply(v);
    // paper compositions square each step; past this they only get smaller
    if (v.exponent < -(std::int64_t{1} << 60)) break;
  }
  return v;
}

std::string Modulus::describe() const {
  switch (kind_) {
    case Kind::paper:
      return "paper";
    case Kind::linear: {
      std::ostringstream os;
      os.precision(17);
      os << "linear:" << c_;
      return os.str();
    }
    case Kind::table:
      return "table";
  }
  return "paper";
}

Modulus default_modulus() { return Modulus::paper(); }

}  // namespace coarse::extend
