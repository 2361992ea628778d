#pragma once

#include <exception>
#include <functional>

namespace perpetua::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int status = 0;  // GSL status; 0 on success
  bool ok() const { return status == 0; }
};

using Integrand = std::function<double(double)>;

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;
  int limit = 2000;
};

// Adaptive Gauss-Kronrod (21 point) on [a, b].
Result integrate(const Integrand& f, double a, double b, Tolerance tol = {});

// Adaptive with epsilon extrapolation; tolerates integrable endpoint singularities.
Result integrate_singular(const Integrand& f, double a, double b, Tolerance tol = {});

// [a, +inf)
Result integrate_to_infinity(const Integrand& f, double a, Tolerance tol = {});

enum class Oscillation { Sine, Cosine };

// int_a^inf f(r) sin(omega r) dr or cos(omega r) dr, cycle by cycle with
// extrapolation. Only an absolute tolerance applies.
Result integrate_fourier(const Integrand& f, double a, double omega, Oscillation kind, double abs_tol,
                         int limit = 2000);

}  // namespace perpetua::quad
