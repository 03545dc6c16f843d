#pragma once

#include <Eigen/Dense>

#include <random>

#include "noon/fock.hpp"

namespace randomstate {

/// Complex Gaussian amplitudes, normalized.
noon::fock::FixedNState fixed(std::mt19937_64& rng, int total);

/// Mixture of `rank` random pure states spread over all totals <= max_total
/// (coherent across sectors), on a dense basis with cutoff max_total.
noon::fock::TwoModeDensityMatrix dense(std::mt19937_64& rng, int max_total, int rank);

/// Random number-conserving mixture: per sector a random positive block,
/// with random sector weights.
noon::fock::SectorDensityMatrix sectors(std::mt19937_64& rng, int max_total, int rank);

}  // namespace randomstate
