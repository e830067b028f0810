// Acceptance suite: runs every criterion and prints one pass/fail line each.
// Exit code 0 iff all executed criteria pass. --extended enables the large
// F_{27^6} enumerations (criteria 7 and 8).

#include <cstdio>
#include <cstring>
#include <string>

#include "maxcurves/repro.hpp"

#ifndef MAXCURVES_SOURCE_DIR
#define MAXCURVES_SOURCE_DIR "."
#endif

int main(int argc, char** argv) {
  bool extended = false;
  unsigned workers = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--extended")) extended = true;
    else if (!std::strcmp(argv[i], "--workers") && i + 1 < argc) workers = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: acceptance [--extended] [--workers N]\n");
      return 2;
    }
  }

  maxcurves::repro::AcceptanceOptions opts;
  opts.extended = extended;
  opts.workers = workers;
  opts.schema_path = std::string(MAXCURVES_SOURCE_DIR) + "/schema/report.schema.json";
  opts.progress = [](maxcurves::u64 done, maxcurves::u64 total) {
    if (done % 8 == 0 || done == total)
      std::fprintf(stderr, "\r  progress: %llu/%llu chunks", static_cast<unsigned long long>(done),
                   static_cast<unsigned long long>(total));
    if (done == total) std::fprintf(stderr, "\n");
  };

  auto results = maxcurves::repro::run_acceptance(opts);
  int failures = 0;
  for (const auto& r : results) {
    if (!r.ran) {
      std::printf("SKIP criterion %d: %s (extended; enable with --extended)\n", r.id, r.name.c_str());
      continue;
    }
    if (r.pass) {
      std::printf("PASS criterion %d: %s (%.2f s, budget %.0f s)\n", r.id, r.name.c_str(), r.seconds,
                  r.budget_seconds);
    } else {
      ++failures;
      std::printf("FAIL criterion %d: %s (%.2f s)\n", r.id, r.name.c_str(), r.seconds);
      for (const auto& f : r.failures) std::printf("     - %s\n", f.c_str());
    }
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
