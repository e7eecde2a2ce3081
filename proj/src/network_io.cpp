#include "prospector/network_io.hpp"

#include "prospector/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace prospector {

std::string format_exact(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_networks(std::ostream& out, std::span<const JointTable> networks) {
  out << "{\n  \"format\": \"" << kNetworkFormat << "\",\n  \"version\": " << kNetworkFormatVersion
      << ",\n  \"networks\": [";
  for (std::size_t n = 0; n < networks.size(); ++n) {
    const auto& table = networks[n];
    out << (n == 0 ? "\n" : ",\n") << "    {\"kind\": \"" << to_string(table.kind()) << "\"";
    if (const auto& p = table.provenance()) {
      out << ", \"provenance\": {\"seed\": " << p->seed << ", \"index\": " << p->index
          << ", \"resamples\": " << p->resamples << "}";
    }
    out << ", \"cells\": [";
    for (int i = 0; i < 8; ++i) out << (i ? ", " : "") << format_exact(table[i]);
    out << "]}";
  }
  out << (networks.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::vector<JointTable> read_networks(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("network file is not valid JSON: ") + e.what());
  }

  try {
    if (doc.at("format").get<std::string>() != kNetworkFormat) {
      throw InvalidArgument("not a network file (format tag mismatch)");
    }
    if (doc.at("version").get<int>() != kNetworkFormatVersion) {
      throw InvalidArgument("unsupported network file version");
    }
    std::vector<JointTable> networks;
    for (const auto& entry : doc.at("networks")) {
      const auto& values = entry.at("cells");
      if (!values.is_array() || values.size() != 8) {
        throw InvalidArgument("each network needs exactly 8 cells");
      }
      Cells cells;
      for (int i = 0; i < 8; ++i) cells[i] = values[i].get<double>();
      std::optional<Provenance> provenance;
      if (entry.contains("provenance")) {
        const auto& p = entry.at("provenance");
        provenance = Provenance{p.at("seed").get<std::uint64_t>(), p.at("index").get<std::uint64_t>(),
                                p.at("resamples").get<std::uint32_t>()};
      }
      const auto kind = parse_relation(entry.value("kind", std::string("unspecified")));
      networks.emplace_back(cells, kind, provenance);
    }
    return networks;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed network file: ") + e.what());
  }
}

void save_networks(const std::filesystem::path& path, std::span<const JointTable> networks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_networks(out, networks);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::vector<JointTable> load_networks(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return read_networks(in);
}

}  // namespace prospector
