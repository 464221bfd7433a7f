#include <cstdio>
#include <cstdlib>
#include <string>

#include "lepage/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  bool ok = true;
  for (const auto& r : lepage::run_acceptance(seed)) {
    std::printf("%s %2d %s (%.2f s): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
