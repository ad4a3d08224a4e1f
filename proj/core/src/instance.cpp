#include "binpack/instance.hpp"

#include <fstream>
#include <sstream>

#include "binpack/errors.hpp"

namespace binpack {

std::optional<std::string> validate_instance(const Instance& inst) {
  if (inst.den < 1) return "capacity denominator must be >= 1";
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) {
    const std::int64_t v = inst.sizes[i].value;
    if (v <= 0) return "size at index " + std::to_string(i) + " is not positive";
    if (v > inst.den) {
      return "size at index " + std::to_string(i) + " exceeds capacity " + std::to_string(inst.den);
    }
  }
  return std::nullopt;
}

Instance load_instance(std::istream& in) {
  Instance inst;
  std::string line;
  bool saw_capacity = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!saw_capacity) {
      std::string keyword;
      ls >> keyword >> inst.den;
      if (ls.fail() || keyword != "capacity") {
        throw ParseError("instance line " + std::to_string(line_no) + ": expected 'capacity <den>'");
      }
      saw_capacity = true;
      continue;
    }
    std::int64_t v = 0;
    ls >> v;
    std::string rest;
    if (ls.fail() || (ls >> rest)) {
      throw ParseError("instance line " + std::to_string(line_no) + ": expected one integer size");
    }
    inst.sizes.push_back(Size{v});
  }
  if (!saw_capacity) throw ParseError("instance file has no 'capacity' line");
  if (auto bad = validate_instance(inst)) throw ParseError("invalid instance: " + *bad);
  return inst;
}

void save_instance(const Instance& inst, std::ostream& out) {
  out << "capacity " << inst.den << "\n";
  for (const Size& s : inst.sizes) out << s.value << "\n";
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  return load_instance(in);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open instance file for writing: " + path);
  save_instance(inst, out);
}

std::int64_t volume_lower_bound(const Instance& inst) {
  if (inst.den < 1) return 0;
  return (inst.total_value() + inst.den - 1) / inst.den;
}

}  // namespace binpack
