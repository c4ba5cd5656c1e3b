#include "ceq/thresholds.hpp"

#include "ceq/cqe.hpp"
#include "ceq/synth.hpp"

#include <cmath>
#include <stdexcept>

namespace ceq {

namespace {

void check_scales(int n_micro, int n_macro, char const *who)
{
  if (n_macro < 1 || n_micro < 1) { throw std::invalid_argument(std::string(who) + ": scales must be >= 1"); }
  if (n_macro >= n_micro) {
    throw std::invalid_argument(std::string(who) + ": macro scale " + std::to_string(n_macro) +
                                " must be smaller than micro scale " + std::to_string(n_micro));
  }
}

void check_unit(double v, char const *who, char const *what)
{
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": " + what + " = " + std::to_string(v) + " outside [0, 1]");
  }
}

// Targets within this of 1 count as fully deterministic.
constexpr double kUnitSlack = 1e-12;

double bits_for_determinism(double det) { return uncertainty(solve_x_for_determinism(det)); }

std::vector<double> linear(double lo, double hi, int points)
{
  if (points < 2) { throw std::invalid_argument("sweep: need at least 2 points"); }
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    v[static_cast<std::size_t>(k)] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  v.back() = hi;
  return v;
}

} // namespace

double absolute_threshold(int n_micro, int n_macro, double deg_micro)
{
  check_scales(n_micro, n_macro, "absolute_threshold");
  check_unit(deg_micro, "absolute_threshold", "deg_micro");
  double const required = static_cast<double>(n_macro) / static_cast<double>(n_micro) + deg_micro;
  if (required >= 1.0 - kUnitSlack) { return 0.0; }
  return bits_for_determinism(required);
}

double equivalent_threshold(double ei_micro, int n_macro, double deg_macro)
{
  if (n_macro < 1) { throw std::invalid_argument("equivalent_threshold: n_macro must be >= 1"); }
  check_unit(deg_macro, "equivalent_threshold", "deg_macro");
  if (!(ei_micro >= 0.0)) {
    throw std::invalid_argument("equivalent_threshold: micro EI " + std::to_string(ei_micro) + " is negative");
  }
  double const required = ei_micro / static_cast<double>(n_macro) + deg_macro;
  if (required > 1.0 + kUnitSlack) {
    throw std::invalid_argument("equivalent_threshold: micro EI " + std::to_string(ei_micro) +
                                " is out of reach for a macro model with n = " + std::to_string(n_macro));
  }
  if (required >= 1.0 - kUnitSlack) { return 0.0; }
  return bits_for_determinism(required);
}

double degeneracy_boundary(int n_micro, int n_macro)
{
  check_scales(n_micro, n_macro, "degeneracy_boundary");
  return 1.0 - static_cast<double>(n_macro) / static_cast<double>(n_micro);
}

bool ce_condition(double delta_uncertainty, double at, double et) { return delta_uncertainty > at - et; }

double ei_at_uncertainty(int n, double uncertainty_bits, double degeneracy)
{
  if (!(uncertainty_bits >= 0.0 && uncertainty_bits <= 1.0)) {
    throw std::invalid_argument("ei_at_uncertainty: uncertainty " + std::to_string(uncertainty_bits) +
                                " outside [0, 1] bits");
  }
  double const x = std::min(1.0, std::max(0.5, std::exp2(-uncertainty_bits)));
  return static_cast<double>(n) * (closed_determinism(x) - degeneracy);
}

ThresholdReport threshold_report(int n_micro, int n_macro, double deg_micro, double micro_uncertainty_bits)
{
  ThresholdReport r;
  r.n_micro = n_micro;
  r.n_macro = n_macro;
  r.deg_micro = deg_micro;
  r.micro_uncertainty_bits = micro_uncertainty_bits;
  r.at_bits = absolute_threshold(n_micro, n_macro, deg_micro);
  r.db = degeneracy_boundary(n_micro, n_macro);
  r.ei_micro = ei_at_uncertainty(n_micro, micro_uncertainty_bits, deg_micro);
  r.et_bits = r.ei_micro <= 0.0 ? 1.0 : equivalent_threshold(r.ei_micro, n_macro);
  r.ce_margin = r.at_bits - r.et_bits;
  return r;
}

std::vector<int> sweep_figures() { return {9, 11, 12, 14, 15, 16}; }

Table sweep(int figure, SweepOptions const &o)
{
  Table t;
  auto const bits = linear(0.0, 1.0, o.points);

  // ΔEI against a deterministic symmetric macro model, across micro uncertainty.
  auto at_curves = [&](std::vector<std::pair<int, int>> const &pairs) {
    t.columns = {"n_micro", "n_macro", "uncertainty_bits", "ei_micro", "ei_macro", "delta_ei", "at_bits"};
    for (auto const &[nm, nM] : pairs) {
      double const at = absolute_threshold(nm, nM);
      for (double const u : bits) {
        double const ei = ei_at_uncertainty(nm, u);
        t.rows.push_back({double(nm), double(nM), u, ei, double(nM), double(nM) - ei, at});
      }
    }
  };

  switch (figure) {
  case 9: {
    t.columns = {"x", "uncertainty_bits", "closed_determinism", "matrix_determinism"};
    auto const xs = linear(1.0, 0.5, o.points);
    for (double const x : xs) {
      auto const tpm = generate<double>(o.n, x, DegVector{1, 1}).front();
      t.rows.push_back({x, uncertainty(x), closed_determinism(x), determinism(tpm)});
    }
    break;
  }
  case 11: {
    std::vector<std::pair<int, int>> pairs;
    for (int nm = 3; nm <= 11; ++nm) { pairs.emplace_back(nm, 2); }
    at_curves(pairs);
    break;
  }
  case 12: {
    std::vector<std::pair<int, int>> pairs;
    for (int nM = 2; nM <= 10; ++nM) { pairs.emplace_back(11, nM); }
    at_curves(pairs);
    break;
  }
  case 14: {
    t.columns = {"micro_uncertainty_bits", "ei_micro", "macro_uncertainty_bits", "ei_macro", "delta_ei", "et_bits"};
    for (double const um : {0.12, 0.25, 0.42}) {
      double const ei_micro = ei_at_uncertainty(3, um);
      double const et = equivalent_threshold(ei_micro, 2);
      for (double const u : bits) {
        double const ei_macro = ei_at_uncertainty(2, u);
        t.rows.push_back({um, ei_micro, u, ei_macro, ei_macro - ei_micro, et});
      }
    }
    break;
  }
  case 15: {
    t.columns = {"deg_micro", "ei_micro", "ei_macro", "delta_ei", "db"};
    double const db = degeneracy_boundary(o.n_micro, o.n_macro);
    for (double const d : bits) {
      double const ei = static_cast<double>(o.n_micro) * (1.0 - d);
      t.rows.push_back({d, ei, double(o.n_macro), double(o.n_macro) - ei, db});
    }
    break;
  }
  case 16: {
    t.columns = {"deg_micro", "micro_uncertainty_bits", "ei_micro", "at_bits", "et_bits", "db"};
    double const db = degeneracy_boundary(o.n_micro, o.n_macro);
    for (double const d : linear(0.0, db, o.points)) {
      auto const r = threshold_report(o.n_micro, o.n_macro, d, o.micro_uncertainty);
      t.rows.push_back({d, o.micro_uncertainty, r.ei_micro, r.at_bits, r.et_bits, db});
    }
    break;
  }
  default:
    throw std::invalid_argument("sweep: unknown figure " + std::to_string(figure) + " (expected 9, 11, 12, 14, 15, 16)");
  }
  return t;
}

} // namespace ceq
