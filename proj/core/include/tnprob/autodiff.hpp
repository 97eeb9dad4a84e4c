#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tnprob::ad {

/// Reverse-mode tape over scalar doubles. Every recorded node has at most
/// two parents with precomputed local partials, so the backward sweep is a
/// single reverse pass.
class Tape {
 public:
  struct Node {
    double w1 = 0.0, w2 = 0.0;
    std::int32_t p1 = -1, p2 = -1;
  };

  std::int32_t leaf(double v) {
    vals_.push_back(v);
    nodes_.push_back(Node{});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t unary(std::int32_t p, double v, double dv) {
    vals_.push_back(v);
    nodes_.push_back(Node{dv, 0.0, p, -1});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t binary(std::int32_t pa, double wa, std::int32_t pb, double wb,
                      double v) {
    vals_.push_back(v);
    nodes_.push_back(Node{wa, wb, pa, pb});
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  double value(std::int32_t i) const { return vals_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }

  void clear() {
    nodes_.clear();
    vals_.clear();
  }
  void reserve(std::size_t n) {
    nodes_.reserve(n);
    vals_.reserve(n);
  }

  /// Adjoints of every node with respect to the given output.
  std::vector<double> gradient(std::int32_t output) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[static_cast<std::size_t>(output)] = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      const Node& n = nodes_[i];
      const double a = adj[i];
      if (a == 0.0) continue;
      if (n.p1 >= 0) adj[static_cast<std::size_t>(n.p1)] += n.w1 * a;
      if (n.p2 >= 0) adj[static_cast<std::size_t>(n.p2)] += n.w2 * a;
    }
    return adj;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<double> vals_;
};

struct Var {
  Tape* tape = nullptr;
  std::int32_t idx = -1;

  double val() const { return tape->value(idx); }
};

inline Var make_var(Tape& t, double v) { return Var{&t, t.leaf(v)}; }

inline Var operator+(Var a, Var b) {
  return {a.tape, a.tape->binary(a.idx, 1.0, b.idx, 1.0, a.val() + b.val())};
}
inline Var operator+(Var a, double b) {
  return {a.tape, a.tape->unary(a.idx, a.val() + b, 1.0)};
}
inline Var operator+(double a, Var b) { return b + a; }

inline Var operator-(Var a, Var b) {
  return {a.tape, a.tape->binary(a.idx, 1.0, b.idx, -1.0, a.val() - b.val())};
}
inline Var operator-(Var a, double b) { return a + (-b); }
inline Var operator-(double a, Var b) {
  return {b.tape, b.tape->unary(b.idx, a - b.val(), -1.0)};
}
inline Var operator-(Var a) { return 0.0 - a; }

inline Var operator*(Var a, Var b) {
  return {a.tape, a.tape->binary(a.idx, b.val(), b.idx, a.val(), a.val() * b.val())};
}
inline Var operator*(Var a, double b) {
  return {a.tape, a.tape->unary(a.idx, a.val() * b, b)};
}
inline Var operator*(double a, Var b) { return b * a; }

inline Var operator/(Var a, Var b) {
  const double bv = b.val();
  const double v = a.val() / bv;
  return {a.tape, a.tape->binary(a.idx, 1.0 / bv, b.idx, -v / bv, v)};
}
inline Var operator/(Var a, double b) { return a * (1.0 / b); }
inline Var operator/(double a, Var b) {
  const double bv = b.val();
  return {b.tape, b.tape->unary(b.idx, a / bv, -a / (bv * bv))};
}

inline Var exp(Var a) {
  const double v = std::exp(a.val());
  return {a.tape, a.tape->unary(a.idx, v, v)};
}
inline Var log(Var a) {
  return {a.tape, a.tape->unary(a.idx, std::log(a.val()), 1.0 / a.val())};
}
inline Var sqrt(Var a) {
  const double v = std::sqrt(a.val());
  return {a.tape, a.tape->unary(a.idx, v, 0.5 / v)};
}
inline Var sin(Var a) {
  return {a.tape, a.tape->unary(a.idx, std::sin(a.val()), std::cos(a.val()))};
}
inline Var cos(Var a) {
  return {a.tape, a.tape->unary(a.idx, std::cos(a.val()), -std::sin(a.val()))};
}

/// log(1 + exp(x)), numerically stable; derivative is the logistic sigmoid.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline Var softplus(Var a) {
  const double x = a.val();
  const double sig = 1.0 / (1.0 + std::exp(-x));
  return {a.tape, a.tape->unary(a.idx, softplus(x), sig)};
}

inline double value_of(double x) { return x; }
inline double value_of(Var x) { return x.val(); }

/// Complex scalar over a real scalar type (double or Var); complex
/// differentiation is handled by the real/imaginary split.
template <class S>
struct Cplx {
  S re, im;

  friend Cplx operator+(const Cplx& a, const Cplx& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Cplx operator-(const Cplx& a, const Cplx& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator*(const Cplx& a, const S& s) { return {a.re * s, a.im * s}; }
  friend Cplx conj(const Cplx& a) { return {a.re, 0.0 - a.im}; }
  S abs2() const { return re * re + im * im; }
};

}  // namespace tnprob::ad
