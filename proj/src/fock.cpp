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

#include "fockfuse/fock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fockfuse/format.hpp"
#include "json.hpp"

namespace fockfuse {

char to_char(Polarization pol) { return pol == Polarization::H ? 'H' : 'V'; }

std::string_view to_string(DistTag tag) {
  switch (tag) {
    case DistTag::None:
      return "";
    case DistTag::A:
      return "A";
    case DistTag::B:
      return "B";
  }
  return "";
}

Polarization parse_polarization(std::string_view text) {
  if (text == "H" || text == "h") return Polarization::H;
  if (text == "V" || text == "v") return Polarization::V;
  throw std::invalid_argument("unknown polarization '" + std::string(text) + "'");
}

DistTag parse_tag(std::string_view text) {
  if (text.empty() || text == "none" || text == "None") return DistTag::None;
  if (text == "A") return DistTag::A;
  if (text == "B") return DistTag::B;
  throw std::invalid_argument("unknown distinguishability tag '" + std::string(text) + "'");
}

bool is_valid_mode_name(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(name.begin() + 1, name.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c == '\'';
  });
}

ModeId::ModeId(std::string name) : name_(std::move(name)) {
  if (!is_valid_mode_name(name_)) {
    throw std::invalid_argument("invalid mode name '" + name_ + "'");
  }
}

std::string to_string(const ModeKey& key) {
  std::string out = key.mode.str();
  out += ':';
  out += to_char(key.pol);
  if (key.tag != DistTag::None) {
    out += '^';
    out += to_string(key.tag);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FockBasisVector

FockBasisVector::FockBasisVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.first < y.first; });
  for (auto& [key, count] : entries) {
    if (count < 0) throw std::invalid_argument("negative occupation for " + to_string(key));
    if (count == 0) continue;
    if (!entries_.empty() && entries_.back().first == key) {
      entries_.back().second += count;
    } else {
      entries_.emplace_back(std::move(key), count);
    }
  }
}

int FockBasisVector::occupation(const ModeKey& key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, const ModeKey& k) { return e.first < k; });
  return (it != entries_.end() && it->first == key) ? it->second : 0;
}

int FockBasisVector::mode_count(const ModeId& mode) const {
  int n = 0;
  for (const auto& [key, count] : entries_) {
    if (key.mode == mode) n += count;
  }
  return n;
}

int FockBasisVector::mode_count(const ModeId& mode, Polarization pol) const {
  int n = 0;
  for (const auto& [key, count] : entries_) {
    if (key.mode == mode && key.pol == pol) n += count;
  }
  return n;
}

int FockBasisVector::total() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0,
                         [](int acc, const Entry& e) { return acc + e.second; });
}

FockBasisVector FockBasisVector::shifted(const ModeKey& key, int delta) const {
  FockBasisVector out;
  out.entries_ = entries_;
  auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), key,
                             [](const Entry& e, const ModeKey& k) { return e.first < k; });
  if (it != out.entries_.end() && it->first == key) {
    it->second += delta;
    if (it->second < 0) throw std::invalid_argument("occupation below zero for " + to_string(key));
    if (it->second == 0) out.entries_.erase(it);
  } else {
    if (delta < 0) throw std::invalid_argument("occupation below zero for " + to_string(key));
    if (delta > 0) out.entries_.insert(it, {key, delta});
  }
  return out;
}

std::string to_string(const FockBasisVector& basis) {
  if (basis.empty()) return "|vac>";
  std::string out = "|";
  bool first = true;
  for (const auto& [key, count] : basis.entries()) {
    if (!first) out += ',';
    first = false;
    out += to_string(key);
    if (count != 1) out += "^" + std::to_string(count);
  }
  return out + ">";
}

// ---------------------------------------------------------------------------
// PureState

namespace {

void prune(PureState::Terms& terms) {
  std::erase_if(terms, [](const auto& kv) { return std::abs(kv.second) < kPruneTolerance; });
}

}  // namespace

PureState::PureState(Terms terms) : terms_(std::move(terms)) { prune(terms_); }

PureState PureState::vacuum() {
  Terms t;
  t.emplace(FockBasisVector{}, Complex{1.0, 0.0});
  return PureState(std::move(t));
}

Complex PureState::amplitude(const FockBasisVector& basis) const {
  auto it = terms_.find(basis);
  return it == terms_.end() ? Complex{} : it->second;
}

double PureState::norm_squared() const {
  double acc = 0.0;
  for (const auto& [basis, amp] : terms_) acc += std::norm(amp);
  return acc;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

int PureState::max_photon_count() const {
  int n = 0;
  for (const auto& [basis, amp] : terms_) n = std::max(n, basis.total());
  return n;
}

PureState PureState::normalized() const {
  double n = norm();
  if (n == 0.0) return PureState();
  return scaled(1.0 / n);
}

PureState PureState::scaled(Complex factor) const {
  Terms t;
  for (const auto& [basis, amp] : terms_) t.emplace_hint(t.end(), basis, amp * factor);
  return PureState(std::move(t));
}

PureState PureState::plus(const PureState& other, Complex factor) const {
  Terms t = terms_;
  for (const auto& [basis, amp] : other.terms_) t[basis] += amp * factor;
  return PureState(std::move(t));
}

// ---------------------------------------------------------------------------
// MixedState

MixedState::MixedState(std::vector<MixedBranch> branches) {
  double total = 0.0;
  for (auto& b : branches) {
    if (b.weight < 0.0 || b.weight > 1.0 + 1e-12) {
      throw std::invalid_argument("mixture weight outside [0,1]");
    }
    total += b.weight;
    if (b.weight > 0.0) branches_.push_back(std::move(b));
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights sum to " + format_sig(total, 17) + ", not 1");
  }
}

MixedState MixedState::pure(PureState state) {
  return MixedState({MixedBranch{1.0, std::move(state)}});
}

// ---------------------------------------------------------------------------
// Operations

PureState create_photon(const PureState& state, const ModeKey& key, int photon_cap) {
  PureState::Terms out;
  for (const auto& [basis, amp] : state.terms()) {
    if (basis.total() + 1 > photon_cap) {
      throw PhotonCapError("creating " + to_string(key) + " exceeds photon cap " +
                           std::to_string(photon_cap));
    }
    int n = basis.occupation(key);
    out[basis.shifted(key, 1)] += amp * std::sqrt(static_cast<double>(n + 1));
  }
  return PureState(std::move(out));
}

Complex inner_product(const PureState& x, const PureState& y) {
  const auto& small = x.size() <= y.size() ? x : y;
  const auto& large = x.size() <= y.size() ? y : x;
  Complex acc{};
  for (const auto& [basis, amp] : small.terms()) {
    Complex other = large.amplitude(basis);
    acc += (&small == &x) ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return acc;
}

double fidelity(const PureState& x, const PureState& y) {
  double nx = x.norm_squared();
  double ny = y.norm_squared();
  if (nx == 0.0 || ny == 0.0) return 0.0;
  return std::norm(inner_product(x, y)) / (nx * ny);
}

PureState apply_mode_map(const PureState& state, const ModeMap& map, int photon_cap) {
  PureState::Terms out;
  for (const auto& [basis, amp] : state.terms()) {
    PureState::Terms partial;
    partial.emplace(FockBasisVector{}, amp);
    for (const auto& [key, count] : basis.entries()) {
      std::optional<ModeImage> image = map(key);
      ModeImage img = image ? std::move(*image) : ModeImage{{key, Complex{1.0, 0.0}}};
      for (auto& [image_key, coef] : img) image_key.tag = key.tag;
      double inv_sqrt_fact = 1.0;
      for (int k = 0; k < count; ++k) {
        PureState::Terms next;
        for (const auto& [pbasis, pamp] : partial) {
          if (pbasis.total() + 1 > photon_cap) {
            throw PhotonCapError("mode transformation exceeds photon cap " +
                                 std::to_string(photon_cap));
          }
          for (const auto& [image_key, coef] : img) {
            int n = pbasis.occupation(image_key);
            next[pbasis.shifted(image_key, 1)] +=
                pamp * coef * std::sqrt(static_cast<double>(n + 1));
          }
        }
        partial = std::move(next);
        inv_sqrt_fact /= std::sqrt(static_cast<double>(k + 1));
      }
      if (count > 1) {
        for (auto& [pbasis, pamp] : partial) pamp *= inv_sqrt_fact;
      }
    }
    for (const auto& [pbasis, pamp] : partial) out[pbasis] += pamp;
  }
  return PureState(std::move(out));
}

// ---------------------------------------------------------------------------
// Detection

bool ModeRequirement::matches(const FockBasisVector& basis) const {
  if (kind == Kind::Unconstrained) return true;
  int n = 0;
  int n_pol = 0;
  for (const auto& mode : modes) {
    n += basis.mode_count(mode);
    n_pol += basis.mode_count(mode, pol);
  }
  switch (kind) {
    case Kind::ExactlyOne:
      return n == 1 && n_pol == 1;
    case Kind::ExactlyOneAnyPol:
      return n == 1;
    case Kind::Empty:
      return n == 0;
    case Kind::Unconstrained:
      return true;
  }
  return true;
}

DetectionPattern& DetectionPattern::require(const ModeId& mode, ExactlyOne req) {
  return require_group({mode}, ModeRequirement::Kind::ExactlyOne, req.pol);
}
DetectionPattern& DetectionPattern::require(const ModeId& mode, ExactlyOneAnyPol) {
  return require_group({mode}, ModeRequirement::Kind::ExactlyOneAnyPol);
}
DetectionPattern& DetectionPattern::require(const ModeId& mode, Empty) {
  return require_group({mode}, ModeRequirement::Kind::Empty);
}
DetectionPattern& DetectionPattern::require(const ModeId& mode, Unconstrained) {
  return require_group({mode}, ModeRequirement::Kind::Unconstrained);
}

DetectionPattern& DetectionPattern::require_group(std::vector<ModeId> modes,
                                                  ModeRequirement::Kind kind, Polarization pol) {
  if (modes.empty()) throw std::invalid_argument("detection requirement without modes");
  requirements_.push_back(ModeRequirement{std::move(modes), kind, pol});
  return *this;
}

bool DetectionPattern::matches(const FockBasisVector& basis) const {
  return std::all_of(requirements_.begin(), requirements_.end(),
                     [&](const ModeRequirement& r) { return r.matches(basis); });
}

const ModeRequirement* DetectionPattern::find(const ModeId& mode) const {
  for (const auto& r : requirements_) {
    if (r.modes.size() == 1 && r.modes.front() == mode) return &r;
  }
  return nullptr;
}

std::vector<ModeId> DetectionPattern::modes() const {
  std::vector<ModeId> out;
  for (const auto& r : requirements_) out.insert(out.end(), r.modes.begin(), r.modes.end());
  return out;
}

std::string DetectionPattern::label() const {
  std::string out;
  for (const auto& r : requirements_) {
    if (!out.empty()) out += ' ';
    for (std::size_t i = 0; i < r.modes.size(); ++i) {
      if (i) out += '+';
      out += r.modes[i].str();
    }
    out += '=';
    switch (r.kind) {
      case ModeRequirement::Kind::ExactlyOne:
        out += to_char(r.pol);
        break;
      case ModeRequirement::Kind::ExactlyOneAnyPol:
        out += "any";
        break;
      case ModeRequirement::Kind::Empty:
        out += "none";
        break;
      case ModeRequirement::Kind::Unconstrained:
        out += "*";
        break;
    }
  }
  return out;
}

PureState filter(const PureState& state, const DetectionPattern& pattern) {
  PureState::Terms kept;
  for (const auto& [basis, amp] : state.terms()) {
    if (pattern.matches(basis)) kept.emplace_hint(kept.end(), basis, amp);
  }
  return PureState(std::move(kept));
}

ConditionalOutcome project(const PureState& state, const DetectionPattern& pattern) {
  PureState kept = filter(state, pattern);
  double p = kept.norm_squared();
  return ConditionalOutcome{p, p > 0.0 ? kept.normalized() : PureState::zero(), pattern};
}

MixedOutcome project(const MixedState& state, const DetectionPattern& pattern) {
  std::vector<std::pair<double, PureState>> kept;
  double total = 0.0;
  for (const auto& branch : state.branches()) {
    ConditionalOutcome o = project(branch.state, pattern);
    double w = branch.weight * o.probability;
    if (w > 0.0) kept.emplace_back(w, std::move(o.state));
    total += w;
  }
  MixedOutcome out;
  out.probability = total;
  out.pattern = pattern;
  if (total > 0.0) {
    std::vector<MixedBranch> branches;
    double acc = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      // Last weight absorbs rounding so the mixture sums to exactly 1.
      double w = (i + 1 == kept.size()) ? 1.0 - acc : kept[i].first / total;
      acc += w;
      branches.push_back(MixedBranch{std::clamp(w, 0.0, 1.0), std::move(kept[i].second)});
    }
    out.state = MixedState(std::move(branches));
  }
  return out;
}

std::string to_json(const PureState& state) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [basis, amp] : state.terms()) {
    nlohmann::ordered_json occ = nlohmann::ordered_json::array();
    for (const auto& [key, count] : basis.entries()) {
      occ.push_back({key.mode.str(), std::string(1, to_char(key.pol)),
                     std::string(to_string(key.tag)), count});
    }
    nlohmann::ordered_json term;
    term["occupations"] = std::move(occ);
    term["re"] = round_sig(amp.real(), 12);
    term["im"] = round_sig(amp.imag(), 12);
    arr.push_back(std::move(term));
  }
  return arr.dump();
}

}  // namespace fockfuse
