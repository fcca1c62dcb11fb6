#include "svlasov/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace svlasov {

CellWeight locate(double position) {
  const double nearest = std::nearbyint(position);
  if (std::abs(position - nearest) <= kNodeSnap) return {static_cast<long>(nearest), 0.0};
  const double base = std::floor(position);
  return {static_cast<long>(base), position - base};
}

namespace {

long wrap(long i, long n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Interpolation weights along v. Returns false when the point lies outside
// the truncated velocity interval.
bool locate_v(const PhaseGrid& g, double v, CellWeight& cell) {
  cell = locate((v + g.vmax) / g.dv);
  if (cell.base < 0 || cell.base > g.nv - 1) return false;
  if (cell.base == g.nv - 1 && cell.weight > 0.0) return false;
  return true;
}

CellWeight locate_x(const PhaseGrid& g, double x) {
  const double reduced = x - std::floor(x);
  CellWeight cell = locate(reduced * g.nx);
  cell.base = wrap(cell.base, g.nx);
  return cell;
}

}  // namespace

double sample_x(const Field& f, double x, int j) {
  if (!std::isfinite(x)) throw std::domain_error("sample_x: non-finite x");
  const auto& g = f.grid();
  const CellWeight c = locate_x(g, x);
  const int i0 = static_cast<int>(c.base);
  if (c.weight == 0.0) return f(i0, j);
  const int i1 = i0 + 1 == g.nx ? 0 : i0 + 1;
  return (1.0 - c.weight) * f(i0, j) + c.weight * f(i1, j);
}

double sample_v(const Field& f, int i, double v) {
  if (!std::isfinite(v)) throw std::domain_error("sample_v: non-finite v");
  CellWeight c;
  if (!locate_v(f.grid(), v, c)) return 0.0;
  const int j0 = static_cast<int>(c.base);
  if (c.weight == 0.0) return f(i, j0);
  return (1.0 - c.weight) * f(i, j0) + c.weight * f(i, j0 + 1);
}

double sample_xv(const Field& f, double x, double v) {
  if (!std::isfinite(x) || !std::isfinite(v)) throw std::domain_error("sample_xv: non-finite point");
  const auto& g = f.grid();
  CellWeight cv;
  if (!locate_v(g, v, cv)) return 0.0;
  const CellWeight cx = locate_x(g, x);
  const int i0 = static_cast<int>(cx.base);
  const int i1 = i0 + 1 == g.nx ? 0 : i0 + 1;
  const int j0 = static_cast<int>(cv.base);
  const int j1 = cv.weight == 0.0 ? j0 : j0 + 1;
  const double lo = (1.0 - cv.weight) * f(i0, j0) + cv.weight * f(i0, j1);
  if (cx.weight == 0.0) return lo;
  const double hi = (1.0 - cv.weight) * f(i1, j0) + cv.weight * f(i1, j1);
  return (1.0 - cx.weight) * lo + cx.weight * hi;
}

}  // namespace svlasov
