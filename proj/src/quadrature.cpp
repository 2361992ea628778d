#include "perpetua/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>

namespace perpetua::quad {

namespace {

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

// Exceptions must not unwind through GSL frames: the thunk parks them here
// and the caller rethrows once GSL has returned.
struct Context {
  const Integrand* f;
  std::exception_ptr error;
};

double thunk(double x, void* params) {
  auto* ctx = static_cast<Context*>(params);
  if (ctx->error) return 0.0;
  try {
    return (*ctx->f)(x);
  } catch (...) {
    ctx->error = std::current_exception();
    return 0.0;
  }
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

struct QawoDeleter {
  void operator()(gsl_integration_qawo_table* t) const { gsl_integration_qawo_table_free(t); }
};

template <class Call>
Result run(const Integrand& f, Call&& call) {
  silence_gsl();
  Context ctx{&f, nullptr};
  gsl_function fn{&thunk, &ctx};
  Result r;
  r.status = call(&fn, &r.value, &r.abs_error);
  if (ctx.error) std::rethrow_exception(ctx.error);
  return r;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, Tolerance tol) {
  Workspace ws(gsl_integration_workspace_alloc(static_cast<size_t>(tol.limit)));
  return run(f, [&](gsl_function* fn, double* v, double* e) {
    return gsl_integration_qag(fn, a, b, tol.abs, tol.rel, static_cast<size_t>(tol.limit), GSL_INTEG_GAUSS21,
                               ws.get(), v, e);
  });
}

Result integrate_singular(const Integrand& f, double a, double b, Tolerance tol) {
  Workspace ws(gsl_integration_workspace_alloc(static_cast<size_t>(tol.limit)));
  return run(f, [&](gsl_function* fn, double* v, double* e) {
    return gsl_integration_qags(fn, a, b, tol.abs, tol.rel, static_cast<size_t>(tol.limit), ws.get(), v, e);
  });
}

Result integrate_to_infinity(const Integrand& f, double a, Tolerance tol) {
  Workspace ws(gsl_integration_workspace_alloc(static_cast<size_t>(tol.limit)));
  return run(f, [&](gsl_function* fn, double* v, double* e) {
    return gsl_integration_qagiu(fn, a, tol.abs, tol.rel, static_cast<size_t>(tol.limit), ws.get(), v, e);
  });
}

Result integrate_fourier(const Integrand& f, double a, double omega, Oscillation kind, double abs_tol,
                         int limit) {
  const auto n = static_cast<size_t>(limit);
  Workspace ws(gsl_integration_workspace_alloc(n));
  Workspace cycles(gsl_integration_workspace_alloc(n));
  std::unique_ptr<gsl_integration_qawo_table, QawoDeleter> table(gsl_integration_qawo_table_alloc(
      omega, 1.0, kind == Oscillation::Sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 25));
  return run(f, [&](gsl_function* fn, double* v, double* e) {
    return gsl_integration_qawf(fn, a, abs_tol, n, ws.get(), cycles.get(), table.get(), v, e);
  });
}

}  // namespace perpetua::quad
