#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "simperm/errors.hpp"
#include "simperm/word_io.hpp"

namespace simperm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_index(const std::string& tok, int line) {
  int v = 0;
  const auto t = trim(tok);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty()) {
    throw ContractError("line " + std::to_string(line) + ": bad index '" + t + "'");
  }
  return v;
}

}  // namespace

std::string format_perm(const SimplePerm& p) {
  std::ostringstream os;
  os << p.target() << ';';
  for (int k = 0; k < p.width(); ++k) os << (k ? "," : " ") << p.control(k);
  os << "; " << std::hex << p.table();
  return os.str();
}

void write_word(std::ostream& os, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    os << format_perm(w[i]);
    const auto label = w.label_at(i);
    if (!label.empty()) os << " # " << label;
    os << '\n';
  }
}

std::string format_word(const Word& w) {
  std::ostringstream os;
  write_word(os, w);
  return os.str();
}

Word read_word(std::istream& is) {
  Word w;
  std::string line;
  std::string open_label;
  std::size_t open_begin = 0;
  int lineno = 0;
  auto close = [&] {
    if (!open_label.empty()) w.add_span({open_label, open_begin, w.size()});
    open_label.clear();
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string label;
    if (const auto h = line.find('#'); h != std::string::npos) {
      label = trim(line.substr(h + 1));
      line = line.substr(0, h);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto s1 = line.find(';');
    const auto s2 = s1 == std::string::npos ? s1 : line.find(';', s1 + 1);
    if (s2 == std::string::npos) {
      throw ContractError("line " + std::to_string(lineno) + ": expected 'target; controls; table'");
    }
    const int target = parse_index(line.substr(0, s1), lineno);
    std::vector<int> controls;
    std::stringstream cs(line.substr(s1 + 1, s2 - s1 - 1));
    for (std::string tok; std::getline(cs, tok, ',');) {
      if (trim(tok).empty()) continue;
      controls.push_back(parse_index(tok, lineno));
    }
    const auto hex = trim(line.substr(s2 + 1));
    std::uint64_t table = 0;
    auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), table, 16);
    if (ec != std::errc{} || p != hex.data() + hex.size() || hex.empty()) {
      throw ContractError("line " + std::to_string(lineno) + ": bad table '" + hex + "'");
    }
    if (label != open_label) {
      close();
      open_label = label;
      open_begin = w.size();
    }
    w.push(SimplePerm(target, controls, table));
  }
  close();
  return w;
}

Word parse_word(const std::string& text) {
  std::istringstream is(text);
  return read_word(is);
}

}  // namespace simperm
