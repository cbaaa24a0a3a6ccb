#include "jainops/accuracy.hpp"

#include <string>

#include "jainops/errors.hpp"

namespace jainops {

Accuracy Accuracy::with_budget(double tolerance) {
  Accuracy acc;
  acc.series_eps = 0.5 * tolerance;
  acc.quad_rel_eps = 0.5 * tolerance;
  return acc;
}

void Accuracy::validate() const {
  if (!(series_eps > 0.0 && series_eps < 1.0))
    throw DomainError("accuracy: series_eps must lie in (0, 1), got " + std::to_string(series_eps));
  if (!(quad_rel_eps > 0.0 && quad_rel_eps < 1.0))
    throw DomainError("accuracy: quad_rel_eps must lie in (0, 1), got " +
                      std::to_string(quad_rel_eps));
  if (v_cap < 1) throw DomainError("accuracy: v_cap must be >= 1");
  if (panel_cap < 1) throw DomainError("accuracy: panel_cap must be >= 1");
}

}  // namespace jainops
