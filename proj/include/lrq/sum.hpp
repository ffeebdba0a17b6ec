#pragma once

#include <cmath>
#include <limits>

namespace lrq {

// Neumaier compensated sum.
struct CompensatedSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    if (std::fabs(s) >= std::fabs(v)) c += (s - t) + v;
    else c += (v - t) + s;
    s = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return s + c; }
};

// Running log(sum exp(x_i)) with a floating reference point.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  void add(double x) {
    if (x <= max) {
      sum += std::exp(x - max);
    } else if (max == -std::numeric_limits<double>::infinity()) {
      max = x;
      sum = 1.0;
    } else {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  void merge(const LogSumExp& o) {
    if (o.max == -std::numeric_limits<double>::infinity()) return;
    if (max == -std::numeric_limits<double>::infinity()) {
      *this = o;
    } else if (o.max <= max) {
      sum += o.sum * std::exp(o.max - max);
    } else {
      sum = sum * std::exp(max - o.max) + o.sum;
      max = o.max;
    }
  }
  double value() const {
    return max == -std::numeric_limits<double>::infinity() ? max : max + std::log(sum);
  }
};

}  // namespace lrq
