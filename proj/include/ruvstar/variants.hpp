#ifndef RUVSTAR_VARIANTS_HPP
#define RUVSTAR_VARIANTS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ruvstar {

enum class MethodFamily { Ols, Ruv2, Ruv3, Ruv4, Cate, Ruvb };

// A method name is family-token.
// Non-sampler tokens: o (plain), m (MAD recentering/rescaling), c
// (control-gene se inflation), l (variance moderation of the final fit);
// ruv3 and cate additionally accept lb / la (moderation before / after the
// generalized-least-squares step; l is a synonym of la there).
// Sampler (ruvb) tokens: nn (normal summaries), n (t summaries), n-l
// (t summaries with variance moderation), s (sample quantiles and lfsr).
struct MethodVariant {
  MethodFamily family = MethodFamily::Ols;
  std::string token = "o";
};

MethodVariant parse_variant(const std::string& name);
std::string print_variant(const MethodVariant& v);

// Every valid method name, for round-trip checks and bench defaults.
std::vector<std::string> all_variant_names();

std::string family_name(MethodFamily f);

}  // namespace ruvstar

#endif  // RUVSTAR_VARIANTS_HPP
