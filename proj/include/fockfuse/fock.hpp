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

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fockfuse {

using Complex = std::complex<double>;

/// Amplitudes with magnitude below this are dropped after every operation.
inline constexpr double kPruneTolerance = 1e-12;
/// Absolute tolerance used for equality assertions throughout the library.
inline constexpr double kDefaultTolerance = 1e-10;
/// Three circuit photons plus one margin for intermediate double occupations.
inline constexpr int kDefaultPhotonCap = 4;

/// H encodes logical 0, V logical 1.
enum class Polarization : std::uint8_t { H = 0, V = 1 };

/// Distinguishability label. Occupations interfere only when mode,
/// polarization and tag all match.
enum class DistTag : std::uint8_t { None = 0, A = 1, B = 2 };

char to_char(Polarization pol);
std::string_view to_string(DistTag tag);
Polarization parse_polarization(std::string_view text);
DistTag parse_tag(std::string_view text);
inline Polarization flip(Polarization pol) {
  return pol == Polarization::H ? Polarization::V : Polarization::H;
}

/// Name of a spatial optical mode ("a", "t1", "c'", ...).
class ModeId {
 public:
  ModeId() = default;
  ModeId(std::string name);  // NOLINT(google-explicit-constructor)
  ModeId(const char* name) : ModeId(std::string(name)) {}  // NOLINT

  const std::string& str() const { return name_; }
  auto operator<=>(const ModeId&) const = default;

 private:
  std::string name_;
};

/// True if `name` is a legal mode identifier: [A-Za-z_][A-Za-z0-9_']*.
bool is_valid_mode_name(std::string_view name);

/// One single-photon mode: spatial mode, polarization, distinguishability tag.
struct ModeKey {
  ModeId mode;
  Polarization pol = Polarization::H;
  DistTag tag = DistTag::None;

  auto operator<=>(const ModeKey&) const = default;
};

std::string to_string(const ModeKey& key);

class PhotonCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Occupation-number basis vector. Entries are kept sorted by ModeKey and
/// zero occupations are never stored.
class FockBasisVector {
 public:
  using Entry = std::pair<ModeKey, int>;

  FockBasisVector() = default;
  explicit FockBasisVector(std::vector<Entry> entries);

  int occupation(const ModeKey& key) const;
  /// Photons in `mode` summed over polarizations and tags.
  int mode_count(const ModeId& mode) const;
  /// Photons in (mode, pol) summed over tags.
  int mode_count(const ModeId& mode, Polarization pol) const;
  int total() const;

  /// Copy with the occupation of `key` shifted by `delta` (result must be >= 0).
  FockBasisVector shifted(const ModeKey& key, int delta) const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  auto operator<=>(const FockBasisVector&) const = default;

 private:
  std::vector<Entry> entries_;
};

std::string to_string(const FockBasisVector& basis);

/// Sparse superposition over Fock basis vectors. Values are immutable in
/// spirit: every operation returns a new state.
class PureState {
 public:
  using Terms = std::map<FockBasisVector, Complex>;

  PureState() = default;
  explicit PureState(Terms terms);

  static PureState vacuum();
  /// The zero vector; used as the "nothing survived" marker of a projection.
  static PureState zero() { return PureState(); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex amplitude(const FockBasisVector& basis) const;
  double norm_squared() const;
  double norm() const;
  int max_photon_count() const;

  PureState normalized() const;
  PureState scaled(Complex factor) const;
  PureState plus(const PureState& other, Complex factor = 1.0) const;

 private:
  Terms terms_;
};

/// Weighted list of pure branches.
struct MixedBranch {
  double weight = 0.0;
  PureState state;
};

class MixedState {
 public:
  MixedState() = default;
  /// Zero-weight branches are dropped; weights must sum to 1 within 1e-12.
  explicit MixedState(std::vector<MixedBranch> branches);
  static MixedState pure(PureState state);

  const std::vector<MixedBranch>& branches() const { return branches_; }

 private:
  std::vector<MixedBranch> branches_;
};

/// Applies the creation operator for `key`: |n> -> sqrt(n+1)|n+1>.
PureState create_photon(const PureState& state, const ModeKey& key,
                        int photon_cap = kDefaultPhotonCap);

inline PureState create_photon(const PureState& state, const ModeId& mode,
                               Polarization pol, DistTag tag = DistTag::None,
                               int photon_cap = kDefaultPhotonCap) {
  return create_photon(state, ModeKey{mode, pol, tag}, photon_cap);
}

/// <x|y>, conjugate-linear in x.
Complex inner_product(const PureState& x, const PureState& y);

/// |<x|y>|^2 / (<x|x><y|y>); zero if either state is the zero vector.
double fidelity(const PureState& x, const PureState& y);

/// Image of a creation operator under a linear mode transformation.
using ModeImage = std::vector<std::pair<ModeKey, Complex>>;
/// Returns std::nullopt for keys the transformation leaves untouched.
using ModeMap = std::function<std::optional<ModeImage>(const ModeKey&)>;

/// Substitutes a^dagger_k -> sum_j U_jk a^dagger_j in every term and
/// re-expands, using |n> = (a^dagger)^n / sqrt(n!) |0>.
PureState apply_mode_map(const PureState& state, const ModeMap& map,
                         int photon_cap = kDefaultPhotonCap);

/// Per-mode constraint of a detection event.
struct ExactlyOne {
  Polarization pol;
  auto operator<=>(const ExactlyOne&) const = default;
};
struct ExactlyOneAnyPol {
  auto operator<=>(const ExactlyOneAnyPol&) const = default;
};
struct Empty {
  auto operator<=>(const Empty&) const = default;
};
struct Unconstrained {
  auto operator<=>(const Unconstrained&) const = default;
};

/// Detection requirement on a set of modes whose photons are pooled, e.g.
/// "exactly one photon in t1 or t2". A single-mode group is the usual case.
struct ModeRequirement {
  std::vector<ModeId> modes;
  enum class Kind : std::uint8_t { ExactlyOne, ExactlyOneAnyPol, Empty, Unconstrained };
  Kind kind = Kind::Unconstrained;
  Polarization pol = Polarization::H;  // used by ExactlyOne only

  bool matches(const FockBasisVector& basis) const;
  auto operator<=>(const ModeRequirement&) const = default;
};

class DetectionPattern {
 public:
  DetectionPattern() = default;

  DetectionPattern& require(const ModeId& mode, ExactlyOne req);
  DetectionPattern& require(const ModeId& mode, ExactlyOneAnyPol req);
  DetectionPattern& require(const ModeId& mode, Empty req);
  DetectionPattern& require(const ModeId& mode, Unconstrained req);
  /// Pooled requirement across several modes.
  DetectionPattern& require_group(std::vector<ModeId> modes, ModeRequirement::Kind kind,
                                  Polarization pol = Polarization::H);

  bool matches(const FockBasisVector& basis) const;
  const std::vector<ModeRequirement>& requirements() const { return requirements_; }
  /// Requirement whose group is exactly {mode}, if any.
  const ModeRequirement* find(const ModeId& mode) const;
  std::vector<ModeId> modes() const;
  /// Compact description such as "a=H c=H t1+t2=any".
  std::string label() const;

  bool operator==(const DetectionPattern&) const = default;

 private:
  std::vector<ModeRequirement> requirements_;
};

struct ConditionalOutcome {
  double probability = 0.0;
  /// Renormalized kept branch; the zero state when probability is 0.
  PureState state;
  DetectionPattern pattern;
};

struct MixedOutcome {
  double probability = 0.0;
  /// Branch weights renormalized by the conditional probability.
  MixedState state;
  DetectionPattern pattern;
};

/// Keeps only basis vectors matching `pattern`. Zero probability is a value,
/// not an error.
ConditionalOutcome project(const PureState& state, const DetectionPattern& pattern);
MixedOutcome project(const MixedState& state, const DetectionPattern& pattern);

/// Same as project() but without renormalizing the kept part.
PureState filter(const PureState& state, const DetectionPattern& pattern);

/// Canonical text form: sorted list of {"occupations", "re", "im"}.
std::string to_json(const PureState& state);

}  // namespace fockfuse
