#include "ruvstar/variants.hpp"

#include <algorithm>
#include <array>

namespace ruvstar {

namespace {

const std::array<std::pair<const char*, MethodFamily>, 6> kFamilies = {{
    {"ols", MethodFamily::Ols},
    {"ruv2", MethodFamily::Ruv2},
    {"ruv3", MethodFamily::Ruv3},
    {"ruv4", MethodFamily::Ruv4},
    {"cate", MethodFamily::Cate},
    {"ruvb", MethodFamily::Ruvb},
}};

std::vector<std::string> tokens_for(MethodFamily f) {
  switch (f) {
    case MethodFamily::Ruvb:
      return {"nn", "n", "n-l", "s"};
    case MethodFamily::Ruv3:
    case MethodFamily::Cate:
      return {"o", "m", "c", "l", "lb", "la"};
    default:
      return {"o", "m", "c", "l"};
  }
}

}  // namespace

std::string family_name(MethodFamily f) {
  for (const auto& [name, fam] : kFamilies) {
    if (fam == f) return name;
  }
  throw std::invalid_argument("unknown method family");
}

MethodVariant parse_variant(const std::string& name) {
  const auto dash = name.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= name.size()) {
    throw std::invalid_argument("method name must look like family-token: " +
                                name);
  }
  const std::string fam_str = name.substr(0, dash);
  const std::string token = name.substr(dash + 1);

  MethodVariant v;
  bool found = false;
  for (const auto& [fname, fam] : kFamilies) {
    if (fam_str == fname) {
      v.family = fam;
      found = true;
      break;
    }
  }
  if (!found) {
    throw std::invalid_argument("unknown method family: " + fam_str);
  }
  const auto toks = tokens_for(v.family);
  if (std::find(toks.begin(), toks.end(), token) == toks.end()) {
    throw std::invalid_argument("token '" + token + "' is not valid for " +
                                fam_str);
  }
  v.token = token;
  return v;
}

std::string print_variant(const MethodVariant& v) {
  return family_name(v.family) + "-" + v.token;
}

std::vector<std::string> all_variant_names() {
  std::vector<std::string> out;
  for (const auto& [name, fam] : kFamilies) {
    for (const auto& tok : tokens_for(fam)) {
      out.push_back(std::string(name) + "-" + tok);
    }
  }
  return out;
}

}  // namespace ruvstar
