#include "soficrank/group_ring.hpp"

#include <cstdio>

namespace soficrank {

std::string CoefficientTraits<double>::str(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

ModulePresentation::ModulePresentation(
    GroupPtr group, std::size_t rank,
    std::vector<std::vector<GroupRingElement>> relators)
    : group_(std::move(group)), rank_(rank), relators_(std::move(relators)) {
  if (!group_) throw ValidationError("presentation without a group");
  if (rank_ < 1) throw ValidationError("presentation rank must be >= 1");
  for (std::size_t j = 0; j < relators_.size(); ++j) {
    if (relators_[j].size() != rank_) {
      throw ValidationError("relator " + std::to_string(j + 1) + " has " +
                            std::to_string(relators_[j].size()) +
                            " entries, expected " + std::to_string(rank_));
    }
    for (const auto& x : relators_[j]) {
      if (!same_group(x.group(), group_)) {
        throw GroupMismatch("relator entry over a different group");
      }
    }
  }
}

GroupRingMatrix ModulePresentation::relator_matrix(std::size_t k) const {
  if (k > relators_.size()) {
    throw ValidationError("relator cutoff " + std::to_string(k) +
                          " exceeds the " + std::to_string(relators_.size()) +
                          " available relators");
  }
  GroupRingMatrix out(group_, k, rank_);
  for (std::size_t j = 0; j < k; ++j) {
    const auto row = partial_adjoint(relators_[j], group_);
    for (std::size_t l = 0; l < rank_; ++l) out(j, l) = row(0, l);
  }
  return out;
}

}  // namespace soficrank
