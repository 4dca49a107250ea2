#include "qims/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qims {

int worker_count() {
  if (const char* env = std::getenv("QIMS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace qims
