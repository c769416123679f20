// One line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>
#include <exception>

#include "minimax/verify/acceptance.hpp"

int main(int argc, char** argv) {
  minimax::verify::AcceptanceOptions options;
  if (argc > 1) options.filter = argv[1];
  try {
    const auto results = minimax::verify::run_acceptance(options);
    int failed = 0;
    int index = 0;
    for (const auto& r : results) {
      std::printf("[%d] %s\n", ++index, minimax::verify::format_result(r).c_str());
      if (!r.passed) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 3;
  }
}
