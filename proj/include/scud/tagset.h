// Closed relation tagset loaded from a definition file (one name per line,
// '#' comments allowed).
#pragma once

#include <set>
#include <string>
#include <vector>

namespace scud {

using Tagset = std::set<std::string>;

Tagset load_tagset(const std::string& path);
Tagset parse_tagset(const std::string& text);

// The bundled SCUD tagset: the 37 UD v2 universal relations plus `preterm`.
const Tagset& default_tagset();
const std::vector<std::string>& default_tagset_names();

// Resolution order: explicit path > SCUDKIT_TAGSET env var > bundled default.
Tagset resolve_tagset(const std::string& explicit_path);

}  // namespace scud
