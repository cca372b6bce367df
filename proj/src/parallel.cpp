#include "qrule/parallel.hpp"

#include <cstdlib>
#include <string>

namespace qrule {

std::size_t default_jobs() {
  if (const char* env = std::getenv("QRULE_JOBS")) {
    try {
      const auto n = std::stoul(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace qrule
