#include "kreach/kernel.hpp"

namespace kreach {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Abel:
      return "abel";
    case KernelFamily::Gaussian:
      return "gaussian";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "abel") return KernelFamily::Abel;
  if (name == "gaussian") return KernelFamily::Gaussian;
  throw ValidationError("unknown kernel family '" + std::string(name) + "' (expected abel or gaussian)");
}

}  // namespace kreach
