// Runs every verify suite and prints one PASS/FAIL line per acceptance
// criterion. Exit status is nonzero when any criterion fails.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "flowlab/kernels.hpp"
#include "flowlab/verify.hpp"

namespace {

const std::map<std::string, std::vector<int>> kSuiteCriteria{
    {"identity", {1}}, {"nfe", {2}},         {"msd", {3, 4}},      {"reformulation", {5}},
    {"drift", {6}},    {"convergence", {7}}, {"ablation", {8}},    {"replay", {9}},
};

const std::map<int, std::string> kCriterionNames{
    {1, "reconstruction-inversion error identity"},
    {2, "edit pipeline NFE counts"},
    {3, "v* lands on the source"},
    {4, "masked editing preserves background"},
    {5, "two-stage reformulation equivalence"},
    {6, "vanilla inversion drift exceeds recon inversion"},
    {7, "first-order Euler convergence"},
    {8, "t_tau and eta ablations"},
    {9, "seeded runs replay bit-identically"},
};

}  // namespace

int main() {
  std::cout << "kernels: " << flowlab::kernels::active().name << "\n";
  std::map<int, int> checks;
  std::map<int, bool> passed;
  for (const auto& [id, _] : kCriterionNames) passed[id] = true;

  for (const std::string& suite : flowlab::verify::suite_names()) {
    const auto results = flowlab::verify::run_suite(suite);
    flowlab::verify::print_results(results, std::cout);
    for (const auto& r : results) {
      // A suite-level error carries no criterion; it fails every criterion the suite covers.
      const std::vector<int> ids = r.criterion > 0 ? std::vector<int>{r.criterion} : kSuiteCriteria.at(suite);
      for (int id : ids) {
        ++checks[id];
        passed[id] = passed[id] && r.passed;
      }
    }
  }

  std::cout << "\n";
  bool all = true;
  for (const auto& [id, name] : kCriterionNames) {
    const bool ok = passed[id] && checks[id] > 0;
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << checks[id]
              << " checks)\n";
  }
  return all ? 0 : 1;
}
