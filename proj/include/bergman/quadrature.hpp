#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <vector>

#include "bergman/errors.hpp"

namespace bergman {

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  std::size_t panels = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive G7-K15 quadrature on [a, b].
///
/// The panel with the largest |K15 - G7| estimate is bisected until the summed
/// estimate is at most rel_tol * |integral|. Endpoint singularities with
/// integrable blow-up of the derivative are resolved by repeated bisection
/// toward the endpoint. Throws accuracy_error once max_panels is reached.
template <typename F>
QuadratureResult integrate_adaptive(F f, double a, double b, double rel_tol, std::size_t max_panels = 8000) {
  std::vector<detail::Panel> heap;  // max-heap on error
  heap.push_back(detail::gauss_kronrod_15(f, a, b));
  double total = heap.front().value;
  double error = heap.front().error;

  while (error > rel_tol * std::abs(total)) {
    if (heap.size() >= max_panels) {
      throw accuracy_error("adaptive quadrature did not reach the requested tolerance within the panel budget",
                           total, error);
    }
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw accuracy_error("adaptive quadrature hit the floating-point resolution limit", total, error);
    }
    heap.back() = detail::gauss_kronrod_15(f, worst.a, mid);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(detail::gauss_kronrod_15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end());

    // Re-sum from scratch so running updates cannot drift.
    total = 0;
    error = 0;
    for (const auto& p : heap) {
      total += p.value;
      error += p.error;
    }
  }
  const std::size_t panels = heap.size();
  return {total, error, panels};
}

}  // namespace bergman
