#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace perpetua {

class TestFunction;
using TestFunctionPtr = std::shared_ptr<const TestFunction>;

// f(x) = exp(-rate * x) for x >= 0. Left of the origin f is 1 ("flat", the
// bounded extension exp(-rate * max(x, 0))) or 0 ("zero").
struct ExpDecay {
  enum class Left { Flat, Zero };
  double rate = 1.0;
  Left left = Left::Flat;
};

// f(x) = (shift + |x|)^{-p}
struct PowerTail {
  double p = 1.0;
  double shift = 1.0;
};

// f(x) = 1 / ((2 + |x|) log^p(2 + |x|))
struct LogPower {
  double p = 2.0;
};

// f(x) = 1 on [a, b]
struct Indicator {
  double a = 0.0;
  double b = 1.0;
};

// Piecewise linear through (knots, values); zero left of the first knot and
// an explicit model right of the last one, anchored at the last value.
struct Tabulated {
  enum class Tail { Zero, Power, Exponential };
  std::vector<double> knots;
  std::vector<double> values;
  Tail tail = Tail::Zero;
  double tail_param = 0.0;  // exponent p for Power, rate for Exponential
};

struct Scaled {
  double factor = 1.0;
  TestFunctionPtr inner;
};

struct Sum {
  std::vector<TestFunctionPtr> terms;
};

// A non-negative, locally integrable function on the real line. Immutable;
// combinators share their operands.
class TestFunction {
 public:
  using Family = std::variant<ExpDecay, PowerTail, LogPower, Indicator, Tabulated, Scaled, Sum>;

  /// Throws Error(InvalidArgument) when parameters are out of range.
  explicit TestFunction(Family family);

  double operator()(double x) const;

  /// int over the whole line; +inf when either side has infinite mass.
  double total_integral() const;

  /// sup{x : f(x) > 0}; +inf for unbounded support.
  double support_upper() const;

  const Family& family() const { return family_; }
  std::string family_name() const;

 private:
  Family family_;
};

TestFunction scaled(double factor, const TestFunction& f);
TestFunction sum(const TestFunction& f, const TestFunction& g);

}  // namespace perpetua
