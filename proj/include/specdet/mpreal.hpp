#pragma once

#include <mpfr.h>

#include <complex>
#include <utility>

namespace specdet {

// Minimal fixed-precision MPFR real, just enough for the near-pole Weyl sums
// where individual terms grow like (x/N)^-N and double rounding swamps the
// cancellation.
class MpReal {
 public:
  static constexpr mpfr_prec_t kPrec = 256;

  MpReal() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
  MpReal(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
  MpReal(const MpReal& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept { mpfr_init2(v_, kPrec); mpfr_swap(v_, o.v_); }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend MpReal operator+(const MpReal& a, const MpReal& b) {
    MpReal r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MpReal operator-(const MpReal& a, const MpReal& b) {
    MpReal r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MpReal operator*(const MpReal& a, const MpReal& b) {
    MpReal r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend MpReal operator/(const MpReal& a, const MpReal& b) {
    MpReal r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  MpReal& operator+=(const MpReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  MpReal operator-() const { MpReal r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  static void sin_cos(double angle, MpReal& s, MpReal& c) {
    MpReal a(angle);
    mpfr_sin_cos(s.v_, c.v_, a.v_, MPFR_RNDN);
  }

 private:
  mpfr_t v_;
};

struct MpComplex {
  MpReal re, im;

  MpComplex() = default;
  MpComplex(double r, double i) : re(r), im(i) {}
  MpComplex(MpReal r, MpReal i) : re(std::move(r)), im(std::move(i)) {}

  static MpComplex unit(double angle) {
    MpComplex z;
    MpReal::sin_cos(angle, z.im, z.re);
    return z;
  }

  std::complex<double> to_cplx() const { return {re.to_double(), im.to_double()}; }

  friend MpComplex operator+(const MpComplex& a, const MpComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend MpComplex operator-(const MpComplex& a, const MpComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend MpComplex operator*(const MpComplex& a, const MpComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend MpComplex operator/(const MpComplex& a, const MpComplex& b) {
    MpReal n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  MpComplex& operator+=(const MpComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

}  // namespace specdet
