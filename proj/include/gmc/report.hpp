#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmc/finset.hpp"

namespace gmc {

/// Verdict of one law on one instance. An absent bound means the check was
/// exhaustive.
struct LawReport {
  std::string law;
  std::string instance;
  bool pass = true;
  std::optional<Bound> bound;
  std::string witness;
  std::optional<std::uint64_t> seed;

  std::string verdict() const { return pass ? "pass" : "fail"; }
  std::string bound_text() const { return bound ? std::to_string(*bound) : "exact"; }
};

using LawReports = std::vector<LawReport>;

inline bool all_pass(const LawReports& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

inline const LawReport* first_failure(const LawReports& rs) {
  for (const auto& r : rs)
    if (!r.pass) return &r;
  return nullptr;
}

inline LawReport law_result(std::string law, std::string instance, std::optional<Bound> bound,
                            std::optional<Elem> witness) {
  LawReport r{std::move(law), std::move(instance), !witness.has_value(), bound, "", std::nullopt};
  if (witness) r.witness = witness->str();
  return r;
}

inline LawReport law_failure(std::string law, std::string instance, std::optional<Bound> bound,
                             std::string witness) {
  return LawReport{std::move(law), std::move(instance), false, bound, std::move(witness), std::nullopt};
}

}  // namespace gmc
