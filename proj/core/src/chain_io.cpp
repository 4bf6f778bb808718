#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qlsplab/error.hpp"
#include "qlsplab/pipeline.hpp"

namespace qlsplab {

nlohmann::json chain_to_json(const PermutationChain& chain) {
  nlohmann::json perms = nlohmann::json::array();
  for (Index j = 1; j <= chain.length(); ++j) {
    const auto images = chain.forward(j).images();
    perms.push_back(std::vector<Index>(images.begin(), images.end()));
  }
  return {{"format", kChainFormat},
          {"N", chain.domain_size()},
          {"q", chain.length()},
          {"perms", perms}};
}

PermutationChain chain_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("$", "chain document must be a JSON object");
  auto field = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw SchemaError(key, "missing field");
    return j.at(key);
  };
  const auto& format = field("format");
  if (!format.is_string() || format.get<std::string>() != kChainFormat) {
    throw SchemaError("format", std::string("expected \"") + kChainFormat + "\"");
  }
  const auto& n = field("N");
  const auto& q = field("q");
  if (!n.is_number_integer() || n.get<Index>() < 1) {
    throw SchemaError("N", "must be a positive integer");
  }
  if (!q.is_number_integer() || q.get<Index>() < 1) {
    throw SchemaError("q", "must be a positive integer");
  }
  const auto& perms = field("perms");
  if (!perms.is_array()) throw SchemaError("perms", "must be an array of arrays");
  std::vector<std::vector<Index>> tables;
  tables.reserve(perms.size());
  for (std::size_t t = 0; t < perms.size(); ++t) {
    const std::string where = "perms[" + std::to_string(t) + "]";
    if (!perms[t].is_array()) throw SchemaError(where, "must be an array");
    std::vector<Index> table;
    table.reserve(perms[t].size());
    for (std::size_t i = 0; i < perms[t].size(); ++i) {
      const auto& v = perms[t][i];
      if (!v.is_number_integer()) {
        throw SchemaError(where + "[" + std::to_string(i) + "]", "must be an integer");
      }
      table.push_back(v.get<Index>());
    }
    tables.push_back(std::move(table));
  }
  return chain_from_arrays(n.get<Index>(), q.get<Index>(), tables);
}

void store_chain(const PermutationChain& chain, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  out << canonical_dump(chain_to_json(chain)) << '\n';
  if (!out) throw IoError("write failed for " + path.string() + ": " + std::strerror(errno));
}

PermutationChain load_chain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
  return chain_from_json(j);
}

}  // namespace qlsplab
