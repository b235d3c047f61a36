#include "comptra/assets.hpp"

#include "comptra/error.hpp"

namespace comptra::assets {

std::string_view get(std::string_view name) {
  const auto& table = all();
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorKind::MissingFile, "no embedded asset " + std::string(name));
  return it->second;
}

}  // namespace comptra::assets
