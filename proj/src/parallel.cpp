#include <cstdlib>
#include <string>
#include <thread>

#include "simperm/parallel.hpp"

namespace simperm {

int default_threads() {
  if (const char* env = std::getenv("SIMPERM_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

}  // namespace simperm
