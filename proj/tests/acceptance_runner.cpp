#include <fstream>
#include <iostream>

#include "greens/acceptance.hpp"

int main(int argc, char** argv) {
  greens::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  greens::AcceptanceReport report = greens::run_acceptance(opt, &std::cout);
  std::ofstream f("acceptance_report.json");
  f << report.to_json().dump(2) << "\n";
  std::cout << (report.all_pass ? "acceptance: all criteria passed"
                                : "acceptance: FAILURES present")
            << "\n";
  return report.all_pass ? 0 : 1;
}
