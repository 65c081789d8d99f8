#include "corner/parallel.hpp"

#include <cstdlib>
#include <string>

namespace corner {

unsigned workers_from_env() {
  const char* raw = std::getenv("CORNER_WORKERS");
  if (raw == nullptr || *raw == '\0') return 1;
  try {
    const long v = std::stol(raw);
    if (v < 1) return 1;
    return v > 256 ? 256u : static_cast<unsigned>(v);
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace corner
