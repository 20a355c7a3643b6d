#pragma once

#include <span>
#include <vector>

#include "pdqp/instance.hpp"

namespace pdqp {

inline double relu(double z) { return z > 0.0 ? z : 0.0; }

/// Interval projection built from shifts and ReLUs,
///
///   w = v - has_hi * relu(v - hi)
///   result = w + has_lo * relu(lo - w)
///
/// which equals clamp(v, lo, hi) with unbounded sides passed through. The
/// solver and the unrolled network both project through this one element
/// kernel, so their iterates agree bit for bit.
inline double project_interval(double v, double lo, double hi, double has_lo, double has_hi) {
  const double w = v - has_hi * relu(v - hi);
  return w + has_lo * relu(lo - w);
}

/// Dual-cone projection: inequality-row entries are clipped at zero, equality
/// rows stay free.
inline double project_dual_elem(double v, double is_ineq) { return v + is_ineq * relu(-v); }

/// Componentwise projection onto [l, u] (length n).
void project_primal_inplace(std::span<double> x, const QpInstance& inst);
std::vector<double> project_primal(const std::vector<double>& x, const QpInstance& inst);

/// Componentwise projection onto the dual cone (length m).
void project_dual_inplace(std::span<double> y, const QpInstance& inst);
std::vector<double> project_dual(const std::vector<double>& y, const QpInstance& inst);

}  // namespace pdqp
