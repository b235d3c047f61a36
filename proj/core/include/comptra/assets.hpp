#pragma once

#include <map>
#include <string>
#include <string_view>

namespace comptra::assets {

/// Files from core/assets, compiled into the library. Keys are file names.
const std::map<std::string_view, std::string_view>& all();

/// Throws Error(MissingFile) for unknown names.
std::string_view get(std::string_view name);

}  // namespace comptra::assets
