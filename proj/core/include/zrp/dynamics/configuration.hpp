#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace zrp {

// Occupancies xi(x) on the discrete torus Z/NZ and, when a particle is tagged,
// the site holding it.
struct Configuration {
  std::vector<std::int32_t> occ;
  std::optional<std::size_t> tagged_site;
  std::int64_t total = 0;

  std::size_t size() const noexcept { return occ.size(); }
};

// eta(x) = xi(x + tagged_site mod N). Requires a tagged particle.
std::vector<std::int32_t> environment_view(const Configuration& config);

// Tagged-particle translation theta_z acting on an environment configuration:
// (theta_z eta)(x) = eta(x+z) for x != 0,-z; eta(z)+1 at 0; eta(0)-1 at -z.
std::vector<std::int32_t> tagged_translation(const std::vector<std::int32_t>& eta, int z);

}  // namespace zrp
