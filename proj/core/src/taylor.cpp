#include "fkdv/taylor.hpp"

#include <algorithm>
#include <cmath>

namespace fkdv {

Taylor Taylor::variable(double t0, int order) {
  Taylor x(t0, order);
  if (order >= 1) x[1] = 1.0;
  return x;
}

Taylor Taylor::from_coefficients(std::vector<double> c) {
  Taylor x;
  if (c.empty()) c.push_back(0.0);
  x.c_ = std::move(c);
  return x;
}

double Taylor::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f * (*this)[k];
}

Taylor Taylor::truncated(int order) const {
  Taylor r(0.0, order);
  for (int k = 0; k <= order; ++k) r[k] = (*this)[k];
  return r;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  if (o.order() < order()) c_.resize(o.c_.size());
  for (int k = 0; k <= order(); ++k) c_[k] += o[k];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  if (o.order() < order()) c_.resize(o.c_.size());
  for (int k = 0; k <= order(); ++k) c_[k] -= o[k];
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Taylor operator+(const Taylor& a, const Taylor& b) {
  Taylor r = a;
  r += b;
  return r;
}

Taylor operator-(const Taylor& a, const Taylor& b) {
  Taylor r = a;
  r -= b;
  return r;
}

Taylor operator-(const Taylor& a) { return a * -1.0; }

Taylor operator*(const Taylor& a, const Taylor& b) {
  const int K = std::min(a.order(), b.order());
  Taylor r(0.0, K);
  for (int k = 0; k <= K; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
    r[k] = s;
  }
  return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
  const int K = std::min(a.order(), b.order());
  Taylor q(0.0, K);
  for (int k = 0; k <= K; ++k) {
    double s = a[k];
    for (int j = 1; j <= k; ++j) s -= b[j] * q[k - j];
    q[k] = s / b[0];
  }
  return q;
}

Taylor operator+(const Taylor& a, double s) {
  Taylor r = a;
  r[0] += s;
  return r;
}
Taylor operator+(double s, const Taylor& a) { return a + s; }
Taylor operator-(const Taylor& a, double s) { return a + (-s); }
Taylor operator-(double s, const Taylor& a) { return (-a) + s; }
Taylor operator*(const Taylor& a, double s) {
  Taylor r = a;
  r *= s;
  return r;
}
Taylor operator*(double s, const Taylor& a) { return a * s; }
Taylor operator/(const Taylor& a, double s) { return a * (1.0 / s); }
Taylor operator/(double s, const Taylor& a) { return Taylor(s, a.order()) / a; }

Taylor exp(const Taylor& a) {
  const int K = a.order();
  Taylor e(std::exp(a[0]), K);
  for (int k = 1; k <= K; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * e[k - j];
    e[k] = s / k;
  }
  return e;
}

Taylor log(const Taylor& a) {
  const int K = a.order();
  Taylor l(std::log(a[0]), K);
  for (int k = 1; k <= K; ++k) {
    double s = a[k];
    for (int j = 1; j < k; ++j) s -= static_cast<double>(j) / k * l[j] * a[k - j];
    l[k] = s / a[0];
  }
  return l;
}

namespace {

void sin_cos(const Taylor& a, Taylor& s, Taylor& c) {
  const int K = a.order();
  s = Taylor(std::sin(a[0]), K);
  c = Taylor(std::cos(a[0]), K);
  for (int k = 1; k <= K; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * a[j] * c[k - j];
      cc -= j * a[j] * s[k - j];
    }
    s[k] = ss / k;
    c[k] = cc / k;
  }
}

}  // namespace

Taylor sin(const Taylor& a) {
  Taylor s, c;
  sin_cos(a, s, c);
  return s;
}

Taylor cos(const Taylor& a) {
  Taylor s, c;
  sin_cos(a, s, c);
  return c;
}

Taylor tanh(const Taylor& a) {
  // th' = (1 - th^2) a'
  const int K = a.order();
  Taylor th(std::tanh(a[0]), K);
  Taylor w(1.0 - th[0] * th[0], K);
  for (int k = 1; k <= K; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * w[k - j];
    th[k] = s / k;
    double sq = 0.0;
    for (int i = 0; i <= k; ++i) sq += th[i] * th[k - i];
    w[k] = -sq;
  }
  return th;
}

Taylor sqrt(const Taylor& a) { return pow(a, 0.5); }

Taylor pow(const Taylor& a, double r) {
  const int K = a.order();
  // Small nonnegative integer powers by repeated multiplication: valid at a[0] == 0.
  if (r >= 0.0 && r <= 16.0 && r == std::floor(r)) {
    Taylor result(1.0, K);
    Taylor base = a;
    auto e = static_cast<unsigned>(r);
    while (e != 0U) {
      if ((e & 1U) != 0U) result = result * base;
      e >>= 1U;
      if (e != 0U) base = base * base;
    }
    return result;
  }
  Taylor p(std::pow(a[0], r), K);
  for (int k = 1; k <= K; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += (r * j - (k - j)) * a[j] * p[k - j];
    p[k] = s / (k * a[0]);
  }
  return p;
}

Taylor abs(const Taylor& a) { return a[0] < 0.0 ? -a : a; }

Taylor differentiate(const Taylor& a) {
  const int K = std::max(a.order() - 1, 0);
  Taylor d(0.0, K);
  for (int k = 0; k <= K; ++k) d[k] = (k + 1) * a[k + 1];
  return d;
}

Taylor integrate(const Taylor& a, double constant) {
  Taylor r(constant, a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) r[k + 1] = a[k] / (k + 1);
  return r;
}

Taylor compose(const Taylor& outer, const Taylor& inner) {
  const int K = std::min(outer.order(), inner.order());
  Taylor h = inner.truncated(K);
  h[0] = 0.0;
  Taylor r(outer[K], K);
  for (int k = K - 1; k >= 0; --k) r = r * h + outer[k];
  return r;
}

Taylor revert(const Taylor& forward, double base_point) {
  // Solve forward(base_point + h(d)) = forward[0] + d for the series h.
  const int K = forward.order();
  const double slope = forward[1];
  Taylor h(0.0, K);
  if (K >= 1) h[1] = 1.0 / slope;
  for (int iter = 1; iter < K; ++iter) {
    Taylor shifted = h;
    shifted[0] = base_point;
    Taylor lhs = compose(forward, shifted);
    Taylor target = Taylor::variable(forward[0], K);
    Taylor defect = lhs - target;
    h -= defect / slope;
  }
  h[0] = base_point;
  return h;
}

}  // namespace fkdv
