#include "odsim/loss_table.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "odsim/error.hpp"
#include "odsim/text.hpp"

namespace odsim {

namespace {

bool entry_less(const LossTable::Entry& x, NodeId a, NodeId b) { return x.a != a ? x.a < a : x.b < b; }

}  // namespace

void LossTable::add(std::int64_t slot, NodeId a, NodeId b, double loss_db) {
  if (a == b) throw Error("loss entry pairs a node with itself");
  if (a > b) std::swap(a, b);
  auto& v = by_slot_[slot];
  auto it = std::lower_bound(v.begin(), v.end(), std::pair{a, b},
                             [](const Entry& e, const std::pair<NodeId, NodeId>& k) { return entry_less(e, k.first, k.second); });
  if (it != v.end() && it->a == a && it->b == b) {
    throw Error("duplicate loss entry for pair " + std::to_string(a) + "," + std::to_string(b) + " at slot " +
                std::to_string(slot));
  }
  v.insert(it, Entry{a, b, loss_db});
  ++count_;
}

std::optional<double> LossTable::lookup(std::int64_t slot, NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  const auto found = by_slot_.find(slot);
  if (found == by_slot_.end()) return std::nullopt;
  const auto& v = found->second;
  auto it = std::lower_bound(v.begin(), v.end(), std::pair{a, b},
                             [](const Entry& e, const std::pair<NodeId, NodeId>& k) { return entry_less(e, k.first, k.second); });
  if (it != v.end() && it->a == a && it->b == b) return it->loss_db;
  return std::nullopt;
}

std::vector<std::int64_t> LossTable::slots() const {
  std::vector<std::int64_t> out;
  out.reserve(by_slot_.size());
  for (const auto& [slot, entries] : by_slot_) {
    if (!entries.empty()) out.push_back(slot);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::span<const LossTable::Entry> LossTable::at(std::int64_t slot) const {
  const auto found = by_slot_.find(slot);
  if (found == by_slot_.end()) return {};
  return found->second;
}

LossTable parse_loss_table(std::istream& in, const std::string& source) {
  LossTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::int64_t last_slot = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto tok = text::split(body);
      if (!header && tok.size() >= 3 && tok[1] == "odsim-loss") {
        if (tok[2] != "1") throw ParseError(source, line_no, "unsupported loss file version");
        header = true;
      }
      continue;
    }
    if (!header) throw ParseError(source, line_no, "expected header '# odsim-loss 1' before the first entry");
    const auto f = text::split_fields(body, ',');
    if (f.size() != 4) throw ParseError(source, line_no, "expected slot,node_a,node_b,loss_db");
    const auto slot = text::parse_int<std::int64_t>(text::trim(f[0]));
    const auto a = text::parse_int<NodeId>(text::trim(f[1]));
    const auto b = text::parse_int<NodeId>(text::trim(f[2]));
    const auto loss = text::parse_double(text::trim(f[3]));
    if (!slot || *slot < 0) throw ParseError(source, line_no, "invalid slot");
    if (!a || !b) throw ParseError(source, line_no, "invalid node id");
    if (!loss || std::isnan(*loss)) throw ParseError(source, line_no, "invalid loss value");
    if (*slot < last_slot) throw ParseError(source, line_no, "slots out of order");
    last_slot = *slot;
    try {
      table.add(*slot, *a, *b, *loss);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return table;
}

LossTable load_loss_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open loss file " + path.string());
  return parse_loss_table(in, path.string());
}

void write_loss_table(std::ostream& out, const LossTable& table) {
  out << "# odsim-loss 1\n";
  for (std::int64_t slot : table.slots()) {
    for (const auto& e : table.at(slot)) {
      out << slot << ',' << e.a << ',' << e.b << ',' << text::format_double(e.loss_db) << '\n';
    }
  }
}

}  // namespace odsim
