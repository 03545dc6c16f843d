#pragma once

// Factories for the fixed-N state families.

#include <string>
#include <string_view>

#include "noon/fock.hpp"

namespace noon::states {

using fock::FixedNState;

/// (|N,0> + e^{i phase}|0,N>)/sqrt(2). N >= 1.
FixedNState make_noon(int n, double phase = 0.0);

/// Output of a 50/50 beam splitter fed with N quanta in one port:
/// d_m = sqrt(N! / (2^N m! (N-m)!)). Symmetric in m, so the a/b ordering of
/// the ket does not matter.
FixedNState make_binomial_splitter(int n);

/// Number state with n_L quanta in mode b and N - n_L in mode a (d_{n_L} = 1),
/// so n_L = 0 is |N, 0>.
FixedNState make_number_pair(int left_occupation, int n);

/// (|N-n_L, n_L> + e^{i phase}|n_L, N-n_L>)/sqrt(2), separation N - 2 n_L.
/// Requires n_L < N - n_L.
FixedNState make_embedded_cat(int left_occupation, int n, double phase = 0.0);

enum class RecipeKind { noon, binomial_splitter, embedded_initial, number_pair };

struct StateRecipe {
  RecipeKind kind = RecipeKind::noon;
  int total_number = 1;
  double phase = 0.0;
  int left_occupation = 0;
};

std::string_view to_string(RecipeKind kind);
/// Accepts the enum spellings; "embedded_cat" is an alias of embedded_initial.
RecipeKind parse_recipe_kind(std::string_view name);

/// Throws ValidationError unless N >= 1 and 0 <= n_L <= N.
void validate(const StateRecipe& recipe);
FixedNState build(const StateRecipe& recipe);

}  // namespace noon::states
