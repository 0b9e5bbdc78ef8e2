#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "elastic/identity.hpp"

namespace elastic {

// Identity profile files are JSON (comments allowed):
//
//   {
//     "players": {
//       "A": {"gamma": 0.5, "identifies_with": [{"object": "B", "distance": 1}]}
//     },
//     "groups": {"everyone": ["A", "B"]}
//   }
//
// Players left out keep classical self-interest. Entries in "groups" resolve
// to the mean payoff of their members.
IdentityProfile parse_identity_profile(std::string_view text);
std::string serialize_identity_profile(const IdentityProfile& profile);
IdentityProfile load_identity_profile(const std::filesystem::path& path);

}  // namespace elastic
