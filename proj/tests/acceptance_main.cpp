// Runs every acceptance criterion at full size, one line per criterion.
// Usage: acceptance [--serial] [--scale f] [--only id]

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "ofd/acceptance.hpp"

int main(int argc, char** argv) {
  ofd::AcceptanceOptions options;
  int only = 0;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--serial") == 0) {
      options.parallel = false;
    } else if (std::strcmp(argv[k], "--scale") == 0 && k + 1 < argc) {
      options.scale = std::atof(argv[++k]);
    } else if (std::strcmp(argv[k], "--only") == 0 && k + 1 < argc) {
      only = std::atoi(argv[++k]);
    } else {
      std::fprintf(stderr, "usage: %s [--serial] [--scale f] [--only id]\n", argv[0]);
      return 1;
    }
  }
  auto print = [](const ofd::CriterionResult& r) {
    std::printf("%s\n", r.line().c_str());
    for (const auto& s : r.samples) std::printf("      %s\n", s.c_str());
    std::fflush(stdout);
  };
  int failed = 0;
  if (only > 0) {
    const auto r = ofd::run_criterion(only, options);
    print(r);
    failed = r.pass ? 0 : 1;
  } else {
    for (const auto& r : ofd::run_acceptance(options, print)) failed += r.pass ? 0 : 1;
    std::printf("%d of %d criteria passed\n", ofd::kCriterionCount - failed, ofd::kCriterionCount);
  }
  return failed == 0 ? 0 : 1;
}
