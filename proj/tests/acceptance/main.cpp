#include <cstdio>
#include <exception>

#include "shnw/verify.hpp"

int main() {
  using namespace shnw::verify;
  try {
    const auto results = run_checks(Level::full, {}, [](const CheckResult& r) {
      std::printf("%s\n", format_line(r).c_str());
      std::fflush(stdout);
    });
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(results.size()) - failed,
                results.size());
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 2;
  }
}
