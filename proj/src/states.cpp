#include "noon/states.hpp"

#include <cmath>
#include <string>

namespace noon::states {
namespace {

void require_positive(int n) {
  if (n < 1) throw ValidationError("total number must be at least 1");
}

}  // namespace

FixedNState make_noon(int n, double phase) {
  require_positive(n);
  std::vector<complex> d(static_cast<std::size_t>(n) + 1, 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  d.front() = h;
  d.back() = std::polar(h, phase);
  return FixedNState(n, std::move(d));
}

FixedNState make_binomial_splitter(int n) {
  require_positive(n);
  std::vector<complex> d(static_cast<std::size_t>(n) + 1);
  const double half_log2 = 0.5 * n * std::log(2.0);
  for (int m = 0; m <= n; ++m) d[static_cast<std::size_t>(m)] = std::exp(0.5 * fock::log_binomial(n, m) - half_log2);
  return FixedNState(n, std::move(d));
}

FixedNState make_number_pair(int left_occupation, int n) {
  if (n < 0) throw ValidationError("total number must be nonnegative");
  if (left_occupation < 0 || left_occupation > n)
    throw ValidationError("occupation " + std::to_string(left_occupation) + " outside [0, " +
                          std::to_string(n) + "]");
  std::vector<complex> d(static_cast<std::size_t>(n) + 1, 0.0);
  d[static_cast<std::size_t>(left_occupation)] = 1.0;
  return FixedNState(n, std::move(d));
}

FixedNState make_embedded_cat(int left_occupation, int n, double phase) {
  require_positive(n);
  if (left_occupation < 0) throw ValidationError("occupation must be nonnegative");
  if (2 * left_occupation >= n)
    throw ValidationError("embedded cat needs n_L < N - n_L (nonzero separation)");
  std::vector<complex> d(static_cast<std::size_t>(n) + 1, 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  d[static_cast<std::size_t>(left_occupation)] = h;
  d[static_cast<std::size_t>(n - left_occupation)] = std::polar(h, phase);
  return FixedNState(n, std::move(d));
}

std::string_view to_string(RecipeKind kind) {
  switch (kind) {
    case RecipeKind::noon: return "noon";
    case RecipeKind::binomial_splitter: return "binomial_splitter";
    case RecipeKind::embedded_initial: return "embedded_initial";
    case RecipeKind::number_pair: return "number_pair";
  }
  return "unknown";
}

RecipeKind parse_recipe_kind(std::string_view name) {
  if (name == "noon") return RecipeKind::noon;
  if (name == "binomial_splitter") return RecipeKind::binomial_splitter;
  if (name == "embedded_initial" || name == "embedded_cat") return RecipeKind::embedded_initial;
  if (name == "number_pair") return RecipeKind::number_pair;
  throw ValidationError("unknown state kind '" + std::string(name) + "'");
}

void validate(const StateRecipe& recipe) {
  require_positive(recipe.total_number);
  if (recipe.left_occupation < 0 || recipe.left_occupation > recipe.total_number)
    throw ValidationError("left_occupation must lie in [0, N]");
  if (!std::isfinite(recipe.phase)) throw ValidationError("phase must be finite");
}

FixedNState build(const StateRecipe& recipe) {
  validate(recipe);
  switch (recipe.kind) {
    case RecipeKind::noon: return make_noon(recipe.total_number, recipe.phase);
    case RecipeKind::binomial_splitter: return make_binomial_splitter(recipe.total_number);
    case RecipeKind::embedded_initial:
      return make_embedded_cat(recipe.left_occupation, recipe.total_number, recipe.phase);
    case RecipeKind::number_pair: return make_number_pair(recipe.left_occupation, recipe.total_number);
  }
  throw ValidationError("unknown state kind");
}

}  // namespace noon::states
