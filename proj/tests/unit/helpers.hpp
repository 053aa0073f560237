#pragma once

#include <cmath>
#include <string>

#include "zrp/error.hpp"

namespace zrp::test {

inline std::string data_path(const std::string& name) { return std::string(ZRP_TEST_DATA_DIR) + "/" + name; }

// Upper 1e-3 quantile of chi-square with df degrees of freedom
// (Wilson-Hilferty).
inline double chi2_critical_1e3(double df) {
  const double z = 3.090232306167813;
  const double c = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
}

template <class Fn>
Errc error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a zrp::Error");
}

}  // namespace zrp::test
