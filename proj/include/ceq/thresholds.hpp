#pragma once

#include <string>
#include <vector>

namespace ceq {

/// Micro uncertainty (bits) at which a micro model of n_micro variables with the given
/// degeneracy has EI equal to n_macro. 0 once deg_micro reaches the degeneracy boundary.
double absolute_threshold(int n_micro, int n_macro, double deg_micro = 0.0);

/// Largest macro uncertainty (bits) at which a macro model of n_macro variables still
/// reaches ei_micro, given the macro degeneracy.
double equivalent_threshold(double ei_micro, int n_macro, double deg_macro = 0.0);

/// Micro degeneracy at which a deterministic micro model's EI drops to n_macro.
double degeneracy_boundary(int n_micro, int n_macro);

/// True when the uncertainty removed by coarse-graining exceeds at − et.
bool ce_condition(double delta_uncertainty, double at, double et);

struct ThresholdReport
{
  int n_micro{0};
  int n_macro{0};
  double deg_micro{0};
  double micro_uncertainty_bits{0};
  double ei_micro{0};
  double at_bits{0};
  double et_bits{0};
  double db{0};
  double ce_margin{0}; // at_bits − et_bits
};

/// AT, ET and DB for a micro model at the given uncertainty and degeneracy,
/// coarse-grained onto a symmetric macro model.
ThresholdReport threshold_report(int n_micro, int n_macro, double deg_micro, double micro_uncertainty_bits);

/// Micro EI of a model with n variables at the given uncertainty (bits) and degeneracy.
double ei_at_uncertainty(int n, double uncertainty_bits, double degeneracy = 0.0);

struct SweepOptions
{
  int points{101};
  int n{4};                       // figure 9
  int n_micro{3};                 // figures 15, 16
  int n_macro{2};                 // figures 15, 16
  double micro_uncertainty{0.25}; // figure 16 ET series
};

struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Data behind figure 9, 11, 12, 14, 15 or 16. Throws std::invalid_argument for any other id.
Table sweep(int figure, SweepOptions const &options = {});

std::vector<int> sweep_figures();

} // namespace ceq
