#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bw/stratify.hpp"

namespace bw {

/// Which per-project quantity plays the role of "age" for the chain states.
enum class AgeSource { elapsed_time, completion_offset };

/// Chronological sequence of age states for one window.
struct StateSequence {
  std::vector<size_t> states;             // per record, chronological order
  std::vector<double> state_values;       // representative age per state id
  double bin_width = 0.0;
  double origin = 0.0;                    // window minimum age
  bool degenerate = false;                // single record or single state
  size_t state_count() const { return state_values.size(); }
};

struct TransitionMatrix {
  size_t dim = 0;
  std::vector<std::vector<double>> p;  // row-stochastic
  size_t uniform_fallback_rows = 0;    // rows with no outgoing observations

  double& at(size_t i, size_t j) { return p[i][j]; }
  double at(size_t i, size_t j) const { return p[i][j]; }
};

enum class ChainStatus { ergodic, periodic, reducible, not_converged };

std::string chain_status_name(ChainStatus s);

struct StationaryResult {
  ChainStatus status = ChainStatus::not_converged;
  std::vector<std::vector<double>> limit;  // ergodic limit matrix when ergodic
  std::vector<double> pi;                  // stationary distribution
  size_t iterations = 0;                   // squarings performed
};

/// Project ages per the configured source: the elapsed_time feature, or
/// the completion-date offset from the window minimum in calendar years.
std::vector<double> window_ages(const Window& w, AgeSource source);

/// Default bin width (max - min) / ceil(sqrt(n)).
double default_bin_width(const std::vector<double>& ages);

StateSequence ages_to_states(const Window& w, double bin_width,
                             AgeSource source = AgeSource::elapsed_time);

/// p_ij = transitions i->j / departures from i; a state with no outgoing
/// observations receives the uniform row.
TransitionMatrix build_tpm(const StateSequence& seq);

/// Repeated squaring with per-step row renormalization. Classification:
/// ergodic when the squaring sequence converges to a positive matrix with
/// equal rows; periodic when the chain graph is strongly connected but the
/// limit is not rank-one; reducible when it is not strongly connected.
StationaryResult iterate_to_stationary(const TransitionMatrix& tpm,
                                       double eps = 1e-8,
                                       size_t max_squarings = 64);

/// (record count, completion-date span in calendar years).
std::pair<size_t, double> window_dimensions(const Window& w);

}  // namespace bw
