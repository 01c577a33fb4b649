// Copyright 2026 The fockfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Circuit description language. One statement per line, '#' starts a comment:
//
//   mode <name>
//   photon <mode> <H|V> [A|B]
//   qubit <mode> <slot>
//   qudit <mode1> <mode2> <slot>
//   hwp <mode> <degrees>
//   pbs <in1> <in2> <out1> <out2>
//   unfold <src> <outH> <outV>
//   merge <inH> <inV> <out>
//   relabel <from> <to>
//   sigmax <mode>
//   signflipv <mode>
//   detect <modes> <H|V|any|none> [<modes> <H|V|any|none> ...]
//
// In `detect`, <modes> is a single mode or several joined by '+', in which
// case the photons of those modes are pooled ("t1+t2 any").

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fockfuse/circuit.hpp"
#include "fockfuse/detail/overloaded.hpp"
#include "fockfuse/format.hpp"

namespace fockfuse {

ParseError::ParseError(int line, int column, std::string reason)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + reason),
      line_(line),
      column_(column),
      reason_(std::move(reason)) {}

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char ch = line[i];
    if (ch == '#') break;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    out.push_back(Token{std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return out;
}

class LineParser {
 public:
  LineParser(int line_no, std::vector<Token> tokens, int line_end_column)
      : line_(line_no), tokens_(std::move(tokens)), end_column_(line_end_column) {}

  [[noreturn]] void fail(std::size_t index, const std::string& reason) const {
    int col = index < tokens_.size() ? tokens_[index].column : end_column_;
    throw ParseError(line_, col, reason);
  }

  void expect_arity(std::size_t n, const char* usage) const {
    if (tokens_.size() != n + 1) {
      fail(tokens_.size() > n + 1 ? n + 1 : tokens_.size(),
           "'" + tokens_[0].text + "' expects " + std::to_string(n) + " argument" +
               (n == 1 ? "" : "s") + ": " + usage);
    }
  }

  ModeId mode(std::size_t index) const {
    const auto& text = tokens_[index].text;
    if (!is_valid_mode_name(text)) fail(index, "invalid mode name '" + text + "'");
    return ModeId(text);
  }

  Polarization pol(std::size_t index) const {
    try {
      return parse_polarization(tokens_[index].text);
    } catch (const std::invalid_argument&) {
      fail(index, "expected H or V, got '" + tokens_[index].text + "'");
    }
  }

  double number(std::size_t index) const {
    const auto& text = tokens_[index].text;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
      fail(index, "expected a number, got '" + text + "'");
    }
    return value;
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  int line() const { return line_; }

 private:
  int line_;
  std::vector<Token> tokens_;
  int end_column_;
};

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit circuit;
  ModeTracker tracker;
  std::set<ModeId> declared;
  std::set<std::string> slots;
  bool seen_detect = false;

  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                          : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    LineParser lp(line_no, tokens, static_cast<int>(raw.size()) + 1);
    const std::string& kw = tokens[0].text;

    auto input_mode = [&](std::size_t index) {
      ModeId m = lp.mode(index);
      if (!declared.count(m)) lp.fail(index, "undeclared mode '" + m.str() + "'");
      return m;
    };
    auto new_slot = [&](std::size_t index) {
      const auto& s = tokens[index].text;
      if (!slots.insert(s).second) lp.fail(index, "slot '" + s + "' used twice");
      return s;
    };
    auto element = [&](OpticalElement e) {
      if (seen_detect) lp.fail(0, "optical elements must precede detect lines");
      if (auto err = tracker.apply(e); !err.empty()) {
        // Point at the first argument that names the offending mode.
        std::size_t idx = 1;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          if (err.find("'" + tokens[i].text + "'") != std::string::npos) {
            idx = i;
            break;
          }
        }
        lp.fail(idx, err);
      }
      circuit.add_element(std::move(e));
    };

    if (kw == "mode") {
      lp.expect_arity(1, "mode <name>");
      ModeId m = lp.mode(1);
      if (!circuit.elements().empty()) lp.fail(0, "modes must be declared before elements");
      if (auto err = tracker.declare(m); !err.empty()) lp.fail(1, err);
      declared.insert(m);
      circuit.declare_mode(m);
    } else if (kw == "photon") {
      if (tokens.size() != 3 && tokens.size() != 4) {
        lp.fail(std::min<std::size_t>(tokens.size(), 4),
                "'photon' expects 2 or 3 arguments: photon <mode> <H|V> [tag]");
      }
      ModeId m = input_mode(1);
      Polarization p = lp.pol(2);
      DistTag tag = DistTag::None;
      if (tokens.size() == 4) {
        try {
          tag = parse_tag(tokens[3].text);
        } catch (const std::invalid_argument&) {
          lp.fail(3, "expected tag A or B, got '" + tokens[3].text + "'");
        }
      }
      circuit.add_input(PhotonInput{m, p, tag});
    } else if (kw == "qubit") {
      lp.expect_arity(2, "qubit <mode> <slot>");
      ModeId m = input_mode(1);
      circuit.add_input(QubitSlot{m, new_slot(2)});
    } else if (kw == "qudit") {
      lp.expect_arity(3, "qudit <mode1> <mode2> <slot>");
      ModeId m1 = input_mode(1);
      ModeId m2 = input_mode(2);
      if (m1 == m2) lp.fail(2, "qudit modes must differ");
      circuit.add_input(QuditSlot{m1, m2, new_slot(3)});
    } else if (kw == "hwp") {
      lp.expect_arity(2, "hwp <mode> <degrees>");
      element(Hwp{lp.mode(1), lp.number(2)});
    } else if (kw == "pbs") {
      lp.expect_arity(4, "pbs <in1> <in2> <out1> <out2>");
      element(Pbs{lp.mode(1), lp.mode(2), lp.mode(3), lp.mode(4)});
    } else if (kw == "unfold") {
      lp.expect_arity(3, "unfold <src> <outH> <outV>");
      element(Unfold{lp.mode(1), lp.mode(2), lp.mode(3)});
    } else if (kw == "merge") {
      lp.expect_arity(3, "merge <inH> <inV> <out>");
      element(Merge{lp.mode(1), lp.mode(2), lp.mode(3)});
    } else if (kw == "relabel") {
      lp.expect_arity(2, "relabel <from> <to>");
      element(Relabel{lp.mode(1), lp.mode(2)});
    } else if (kw == "sigmax") {
      lp.expect_arity(1, "sigmax <mode>");
      element(SigmaX{lp.mode(1)});
    } else if (kw == "signflipv") {
      lp.expect_arity(1, "signflipv <mode>");
      element(SignFlipV{lp.mode(1)});
    } else if (kw == "detect") {
      if (tokens.size() < 3 || tokens.size() % 2 == 0) {
        lp.fail(tokens.size() < 3 ? tokens.size() : tokens.size() - 1,
                "'detect' expects <modes> <H|V|any|none> pairs");
      }
      seen_detect = true;
      DetectionPattern pattern;
      std::set<ModeId> used;
      for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
        std::vector<ModeId> group;
        std::string_view spec = tokens[i].text;
        std::size_t start = 0;
        while (true) {
          std::size_t plus = spec.find('+', start);
          std::string name(spec.substr(start, plus == std::string_view::npos ? spec.size() - start
                                                                             : plus - start));
          if (!is_valid_mode_name(name)) lp.fail(i, "invalid mode name '" + name + "'");
          ModeId m(name);
          if (!tracker.live(m)) {
            lp.fail(i, tracker.use(m).empty() ? "mode '" + name + "' is not an output mode"
                                              : tracker.use(m));
          }
          if (!used.insert(m).second) lp.fail(i, "mode '" + name + "' constrained twice");
          group.push_back(m);
          if (plus == std::string_view::npos) break;
          start = plus + 1;
        }
        const std::string& req = tokens[i + 1].text;
        if (req == "H" || req == "V") {
          pattern.require_group(std::move(group), ModeRequirement::Kind::ExactlyOne,
                                parse_polarization(req));
        } else if (req == "any") {
          pattern.require_group(std::move(group), ModeRequirement::Kind::ExactlyOneAnyPol);
        } else if (req == "none") {
          pattern.require_group(std::move(group), ModeRequirement::Kind::Empty);
        } else {
          lp.fail(i + 1, "expected H, V, any or none, got '" + req + "'");
        }
      }
      circuit.add_pattern(std::move(pattern));
    } else {
      lp.fail(0, "unknown statement '" + kw + "'");
    }
  }
  return circuit;
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str());
}

std::string to_dsl(const Circuit& circuit) {
  using detail::Overloaded;
  std::string out;
  for (const auto& m : circuit.declared_modes()) out += "mode " + m.str() + "\n";
  for (const auto& input : circuit.inputs()) {
    out += std::visit(
        Overloaded{
            [](const PhotonInput& p) {
              std::string s = "photon " + p.mode.str() + " " + std::string(1, to_char(p.pol));
              if (p.tag != DistTag::None) s += " " + std::string(to_string(p.tag));
              return s;
            },
            [](const QubitSlot& q) { return "qubit " + q.mode.str() + " " + q.slot; },
            [](const QuditSlot& q) {
              return "qudit " + q.mode1.str() + " " + q.mode2.str() + " " + q.slot;
            },
        },
        input);
    out += "\n";
  }
  for (const auto& e : circuit.elements()) out += to_dsl(e) + "\n";
  for (const auto& p : circuit.patterns()) {
    out += "detect";
    for (const auto& r : p.requirements()) {
      if (r.kind == ModeRequirement::Kind::Unconstrained) continue;
      out += ' ';
      for (std::size_t i = 0; i < r.modes.size(); ++i) {
        if (i) out += '+';
        out += r.modes[i].str();
      }
      if (r.kind == ModeRequirement::Kind::ExactlyOne) {
        out += std::string(" ") + to_char(r.pol);
      } else if (r.kind == ModeRequirement::Kind::ExactlyOneAnyPol) {
        out += " any";
      } else {
        out += " none";
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace fockfuse
