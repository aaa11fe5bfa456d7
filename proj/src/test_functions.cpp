#include "carnot/test_functions.hpp"

#include <cmath>
#include <limits>

namespace carnot {

double TestFunction::sup_norm() const { return std::numeric_limits<double>::infinity(); }

namespace {

class PolynomialFunction final : public TestFunction {
 public:
  explicit PolynomialFunction(Polynomial p) : p_(std::move(p)) {
    for (int a = 0; a < p_.nvars(); ++a) d_.push_back(p_.derivative(a));
  }
  std::string describe() const override { return p_.to_string(); }
  int dim() const override { return p_.nvars(); }
  double value(std::span<const double> x) const override { return p_.evaluate(x); }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t a = 0; a < d_.size(); ++a) out[a] = d_[a].is_zero() ? 0.0 : d_[a].evaluate(x);
  }
  double sup_norm() const override {
    return p_.degree() <= 0 ? std::abs(p_.coefficient(Exponent(p_.nvars(), 0)))
                            : std::numeric_limits<double>::infinity();
  }

 private:
  Polynomial p_;
  std::vector<Polynomial> d_;
};

class ClampedCoordinate final : public TestFunction {
 public:
  ClampedCoordinate(int dim, int index, double c) : dim_(dim), index_(index), c_(c) {}
  std::string describe() const override {
    return std::to_string(c_) + "*tanh(x" + std::to_string(index_ + 1) + "/" + std::to_string(c_) + ")";
  }
  int dim() const override { return dim_; }
  double value(std::span<const double> x) const override { return c_ * std::tanh(x[index_] / c_); }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    const double th = std::tanh(x[index_] / c_);
    out[index_] = 1.0 - th * th;
  }
  double sup_norm() const override { return c_; }

 private:
  int dim_, index_;
  double c_;
};

class Bump final : public TestFunction {
 public:
  explicit Bump(std::vector<double> r) : r_(std::move(r)) {}
  std::string describe() const override {
    std::string s = "bump(";
    for (std::size_t a = 0; a < r_.size(); ++a) s += (a ? "," : "") + std::to_string(r_[a]);
    return s + ")";
  }
  int dim() const override { return static_cast<int>(r_.size()); }
  double value(std::span<const double> x) const override {
    const double s = radius2(x);
    return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
  }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    const double s = radius2(x);
    if (s >= 1.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    const double f = std::exp(1.0 - 1.0 / (1.0 - s));
    const double df_ds = -f / ((1.0 - s) * (1.0 - s));
    for (std::size_t a = 0; a < r_.size(); ++a) out[a] = df_ds * 2.0 * x[a] / (r_[a] * r_[a]);
  }
  double sup_norm() const override { return 1.0; }
  std::optional<std::vector<double>> support() const override { return r_; }

 private:
  double radius2(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t a = 0; a < r_.size(); ++a) s += (x[a] / r_[a]) * (x[a] / r_[a]);
    return s;
  }
  std::vector<double> r_;
};

class Dilated final : public TestFunction {
 public:
  Dilated(const GroupSpec& spec, TestFunctionPtr f, double r) : f_(std::move(f)), r_(r) {
    for (int w : spec.weights()) scale_.push_back(std::pow(r, w));
  }
  std::string describe() const override { return f_->describe() + " o dilation(" + std::to_string(r_) + ")"; }
  int dim() const override { return f_->dim(); }
  double value(std::span<const double> x) const override {
    std::vector<double> y = scaled(x);
    return f_->value(y);
  }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    std::vector<double> y = scaled(x);
    f_->gradient(y, out);
    for (std::size_t a = 0; a < scale_.size(); ++a) out[a] *= scale_[a];
  }
  double sup_norm() const override { return f_->sup_norm(); }
  std::optional<std::vector<double>> support() const override {
    auto s = f_->support();
    if (s)
      for (std::size_t a = 0; a < s->size(); ++a) (*s)[a] /= scale_[a];
    return s;
  }

 private:
  std::vector<double> scaled(std::span<const double> x) const {
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t a = 0; a < y.size(); ++a) y[a] *= scale_[a];
    return y;
  }
  TestFunctionPtr f_;
  double r_;
  std::vector<double> scale_;
};

}  // namespace

TestFunctionPtr polynomial_function(Polynomial p) {
  return std::make_shared<PolynomialFunction>(std::move(p));
}

TestFunctionPtr clamped_coordinate(int dim, int index, double c) {
  if (index < 0 || index >= dim) fail(ErrorCode::InvalidArgument, "coordinate index out of range");
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "clamp level must be positive");
  return std::make_shared<ClampedCoordinate>(dim, index, c);
}

TestFunctionPtr bump(std::vector<double> half_widths) {
  for (double r : half_widths)
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "bump half-widths must be positive");
  return std::make_shared<Bump>(std::move(half_widths));
}

TestFunctionPtr dilated(const GroupSpec& spec, TestFunctionPtr f, double r) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "dilation factor must be positive");
  if (f->dim() != spec.dim()) fail(ErrorCode::DimensionMismatch, "test function dimension differs from group");
  return std::make_shared<Dilated>(spec, std::move(f), r);
}

TestFunctionPtr constant_one(int dim) { return polynomial_function(Polynomial::constant(dim, 1.0)); }

HorizontalGradient::HorizontalGradient(const GroupSpec& spec)
    : fields_(left_invariant_fields(spec)), n_(spec.dim()) {}

void HorizontalGradient::operator()(const TestFunction& f, std::span<const double> x,
                                    std::span<double> out) const {
  std::vector<double> grad(n_), c(n_);
  f.gradient(x, grad);
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    fields_[i].evaluate(x, c);
    double s = 0.0;
    for (int a = 0; a < n_; ++a) s += c[a] * grad[a];
    out[i] = s;
  }
}

double HorizontalGradient::gamma(const TestFunction& f, std::span<const double> x) const {
  std::vector<double> v(fields_.size());
  (*this)(f, x, v);
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

}  // namespace carnot
