#include "qest/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qest/error.hpp"
#include "qest/qasm.hpp"

namespace qest {

using nlohmann::json;

nlohmann::json partition_to_json(const Partition& p) {
  json j;
  j["source_width"] = p.source_width;
  j["blocks"] = json::array();
  for (const Block& b : p.blocks) {
    j["blocks"].push_back(
        {{"index", b.index}, {"qubits", b.qubits}, {"qasm", emit_qasm(b.sub)}});
  }
  return j;
}

Partition partition_from_json(const nlohmann::json& j) {
  Partition p;
  p.source_width = j.at("source_width").get<std::uint32_t>();
  for (const auto& bj : j.at("blocks")) {
    Block b;
    b.index = bj.at("index").get<std::size_t>();
    b.qubits = bj.at("qubits").get<std::vector<std::uint32_t>>();
    b.sub = parse_qasm(bj.at("qasm").get<std::string>());
    p.blocks.push_back(std::move(b));
  }
  return p;
}

nlohmann::json solution_to_json(const SynthesisSolution& s) {
  return {{"block", s.block_index},
          {"qasm", emit_qasm(s.circuit)},
          {"epsilon", s.epsilon},
          {"cnots", s.cnots},
          {"provenance",
           {{"restart", s.provenance.restart},
            {"layers", s.provenance.layers},
            {"branch", s.provenance.branch}}}};
}

SynthesisSolution solution_from_json(const nlohmann::json& j) {
  SynthesisSolution s;
  s.block_index = j.at("block").get<std::size_t>();
  s.circuit = parse_qasm(j.at("qasm").get<std::string>());
  s.epsilon = j.at("epsilon").get<double>();
  s.cnots = j.at("cnots").get<std::size_t>();
  const auto& pj = j.at("provenance");
  s.provenance.restart = pj.at("restart").get<std::uint32_t>();
  s.provenance.layers = pj.at("layers").get<std::uint32_t>();
  s.provenance.branch = pj.at("branch").get<std::uint64_t>();
  return s;
}

nlohmann::json unitary_to_json(const Unitary& u) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      row.push_back({u(r, c).real(), u(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return {{"dim", u.rows()}, {"entries", std::move(rows)}};
}

Unitary unitary_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  Unitary u(dim, dim);
  const auto& rows = j.at("entries");
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& e = rows.at(r).at(c);
      u(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return u;
}

nlohmann::json block_solutions_to_json(const BlockSolutions& bs) {
  json sols = json::array();
  for (const auto& s : bs.solutions) sols.push_back(solution_to_json(s));
  return {{"target", unitary_to_json(bs.target)}, {"solutions", std::move(sols)}};
}

BlockSolutions block_solutions_from_json(const nlohmann::json& j) {
  BlockSolutions bs;
  bs.target = unitary_from_json(j.at("target"));
  for (const auto& sj : j.at("solutions"))
    bs.solutions.push_back(solution_from_json(sj));
  return bs;
}

nlohmann::json approximation_set_to_json(const ApproximationSet& set) {
  json members = json::array();
  for (const auto& m : set.selected) {
    members.push_back({{"choice", m.choice},
                       {"cnots", m.cnots},
                       {"epsilon_sum", m.epsilon_sum}});
  }
  return {{"members", std::move(members)},
          {"similarity", set.similarity},
          {"eps_threshold", set.eps_threshold}};
}

ApproximationSet approximation_set_from_json(const nlohmann::json& j) {
  ApproximationSet set;
  set.eps_threshold = j.at("eps_threshold").get<double>();
  for (const auto& mj : j.at("members")) {
    CandidateAssembly m;
    m.choice = mj.at("choice").get<std::vector<std::size_t>>();
    m.cnots = mj.at("cnots").get<std::size_t>();
    m.epsilon_sum = mj.at("epsilon_sum").get<double>();
    set.selected.push_back(std::move(m));
  }
  set.similarity = j.at("similarity").get<std::vector<std::vector<double>>>();
  return set;
}

std::string distribution_to_csv(const ProbabilityDistribution& d) {
  std::ostringstream out;
  out << "bitstring,probability\n";
  char buf[40];
  for (std::size_t i = 0; i < d.probs.size(); ++i) {
    std::string bits(d.width, '0');
    for (std::uint32_t q = 0; q < d.width; ++q) {
      if (i & (std::size_t(1) << (d.width - 1 - q))) bits[q] = '1';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", d.probs[i]);
    out << bits << ',' << buf << '\n';
  }
  return out.str();
}

ProbabilityDistribution distribution_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("distribution csv: empty file");
  ProbabilityDistribution d;
  std::vector<std::pair<std::string, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("distribution csv: malformed row '" + line + "'");
    rows.emplace_back(line.substr(0, comma),
                      std::stod(line.substr(comma + 1)));
  }
  if (rows.empty()) throw IoError("distribution csv: no rows");
  d.width = static_cast<std::uint32_t>(rows.front().first.size());
  d.probs.assign(std::size_t(1) << d.width, 0.0);
  for (const auto& [bits, prob] : rows) {
    if (bits.size() != d.width)
      throw IoError("distribution csv: inconsistent bitstring width");
    std::size_t idx = 0;
    for (char c : bits) idx = (idx << 1) | (c == '1' ? 1 : 0);
    d.probs[idx] = prob;
  }
  return d;
}

std::string content_hash(const Unitary& u,
                         const std::vector<std::uint64_t>& tags) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const unsigned char* bytes, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  feed(reinterpret_cast<const unsigned char*>(u.data()),
       sizeof(Complex) * static_cast<std::size_t>(u.size()));
  for (std::uint64_t t : tags)
    feed(reinterpret_cast<const unsigned char*>(&t), sizeof(t));
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace qest
