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


#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include "fockfuse/experiments.hpp"
#include "fockfuse/format.hpp"
#include "fockfuse/optics.hpp"

namespace fockfuse {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Complex gaussian() { return {normal_(rng_), normal_(rng_)}; }
  QubitState qubit() { return QubitState::normalized(gaussian(), gaussian()); }
  QuditState4 qudit() {
    return QuditState4::normalized({gaussian(), gaussian(), gaussian(), gaussian()});
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<> normal_{0.0, 1.0};
};

struct Outcome {
  bool passed;
  std::string detail;
};

/// Tracks the worst deviation seen across a batch of comparisons.
class Worst {
 public:
  explicit Worst(double tolerance) : tolerance_(tolerance) {}
  void add(double deviation) { worst_ = std::max(worst_, std::abs(deviation)); }
  Outcome outcome(const std::string& what) const {
    return {worst_ <= tolerance_, what + ": worst deviation " + format_sig(worst_, 3)};
  }

 private:
  double tolerance_;
  double worst_ = 0.0;
};

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const std::vector<double> kPGrid{0.0, 0.25, 0.5, 0.77, 1.0};

std::vector<double> grid21() {
  std::vector<double> out;
  for (int k = 0; k <= 20; ++k) out.push_back(k / 20.0);
  return out;
}

PureState random_two_photon(Sampler& s, const ModeId& x, const ModeId& y) {
  PureState out;
  for (Polarization px : {Polarization::H, Polarization::V}) {
    for (Polarization py : {Polarization::H, Polarization::V}) {
      out = out.plus(create_photon(create_photon(PureState::vacuum(), x, px), y, py), s.gaussian());
    }
  }
  return out.normalized();
}

QubitState basis_qubit(int bit) { return bit ? QubitState(0.0, 1.0) : QubitState(1.0, 0.0); }

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  const double tol = options.tolerance;
  Sampler rng(options.seed);
  const EtaPair eta_pair = options.inject_eta_mismatch ? EtaPair{1.0, 0.6} : EtaPair{1.0, 1.0};

  std::vector<CheckResult> results;
  auto check = [&](const std::string& module, const std::string& name,
                   const std::function<Outcome()>& body) {
    CheckResult r{module, name, false, ""};
    try {
      Outcome o = body();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  };

  // fock-core -----------------------------------------------------------------
  check("fock-core", "creation operator on an occupied mode gives sqrt(2)|2>", [&] {
    PureState s = create_photon(create_photon(PureState::vacuum(), "a", Polarization::H), "a",
                                Polarization::H);
    FockBasisVector two({{ModeKey{"a", Polarization::H}, 2}});
    double dev = std::abs(s.amplitude(two) - std::sqrt(2.0));
    return Outcome{dev <= tol && s.size() == 1, "deviation " + format_sig(dev, 3)};
  });
  check("fock-core", "creation operators on distinct modes commute", [&] {
    Worst w(tol);
    const ModeKey keys[] = {{"a", Polarization::H}, {"a", Polarization::V}, {"t", Polarization::H},
                            {"t", Polarization::H, DistTag::B}};
    for (int trial = 0; trial < 20; ++trial) {
      PureState base = random_two_photon(rng, "a", "t");
      for (const auto& k1 : keys) {
        for (const auto& k2 : keys) {
          if (k1 == k2) continue;
          PureState x = create_photon(create_photon(base, k1), k2);
          PureState y = create_photon(create_photon(base, k2), k1);
          w.add(x.plus(y, -1.0).norm());
        }
      }
    }
    return w.outcome("40 orderings x 20 states");
  });
  check("fock-core", "tagged photons are orthogonal", [&] {
    auto a = create_photon(PureState::vacuum(), "t", Polarization::H, DistTag::A);
    auto b = create_photon(PureState::vacuum(), "t", Polarization::H, DistTag::B);
    auto v = create_photon(PureState::vacuum(), "t", Polarization::V, DistTag::A);
    double dev = std::abs(inner_product(a, b)) + std::abs(inner_product(a, v)) +
                 std::abs(inner_product(a, a) - 1.0);
    return Outcome{dev <= tol, "deviation " + format_sig(dev, 3)};
  });
  check("fock-core", "exhaustive pattern family probabilities sum to the norm", [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      PureState s = random_two_photon(rng, "x", "y").scaled(rng.uniform(0.2, 1.0));
      double total = 0.0;
      for (Polarization px : {Polarization::H, Polarization::V}) {
        for (Polarization py : {Polarization::H, Polarization::V}) {
          total += filter(s, DetectionPattern{}.require("x", ExactlyOne{px}).require("y", ExactlyOne{py}))
                       .norm_squared();
        }
      }
      w.add(total - s.norm_squared());
    }
    return w.outcome("50 random states");
  });

  // optical-elements ----------------------------------------------------------
  check("optical-elements", "elements preserve norm and photon number", [&] {
    Worst w(tol);
    const std::vector<OpticalElement> elements{Hwp{"x", 22.5}, Hwp{"y", 17.3}, Pbs{"x", "y", "x", "y"},
                                               SigmaX{"x"}, SignFlipV{"y"}};
    for (int trial = 0; trial < 50; ++trial) {
      PureState s = random_two_photon(rng, "x", "y");
      for (const auto& e : elements) {
        PureState out = apply_element(s, e);
        w.add(out.norm_squared() - 1.0);
        for (const auto& [basis, amp] : out.terms()) w.add(basis.total() - 2);
      }
    }
    return w.outcome("5 elements x 50 states");
  });
  check("optical-elements", "half-wave plate is an involution", [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      PureState s = random_two_photon(rng, "x", "y");
      double theta = rng.uniform(-90.0, 90.0);
      w.add(apply_hwp(apply_hwp(s, "x", theta), "x", theta).plus(s, -1.0).norm());
    }
    return w.outcome("50 random angles");
  });
  check("optical-elements", "polarizing beam splitter preserves inner products", [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      PureState x = random_two_photon(rng, "x", "y");
      PureState y = random_two_photon(rng, "x", "y");
      Complex before = inner_product(x, y);
      Complex after = inner_product(apply_pbs(x, "x", "y", "u", "v"), apply_pbs(y, "x", "y", "u", "v"));
      w.add(std::abs(before - after));
    }
    return w.outcome("50 random pairs");
  });

  // circuits ------------------------------------------------------------------
  check("circuits", "fusion heralds the product state with probability 1/32 per branch", [&] {
    Worst prob(1e-12);
    Worst fid(tol);
    Worst total(1e-12);
    for (int trial = 0; trial < 100; ++trial) {
      QubitState psi = rng.qubit();
      QubitState phi = rng.qubit();
      QuditState4 target = QuditState4::product(psi, phi);
      double sum = 0.0;
      for (const auto& o : run_fusion(psi, phi)) {
        prob.add(o.probability - 1.0 / 32.0);
        fid.add(1.0 - fidelity(fused_qudit(apply_fusion_feed_forward(o)), target));
        sum += o.probability;
      }
      total.add(sum - 1.0 / 8.0);
    }
    Outcome a = prob.outcome("probability");
    Outcome b = fid.outcome("fidelity");
    Outcome c = total.outcome("total");
    return Outcome{a.passed && b.passed && c.passed,
                   a.detail + "; " + b.detail + "; " + c.detail};
  });
  check("circuits", "fusion of entangled inputs", [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      QuditState4 joint = rng.qudit();
      for (const auto& o : run_fusion(joint)) {
        w.add(1.0 - fidelity(fused_qudit(apply_fusion_feed_forward(o)), joint));
      }
    }
    return w.outcome("50 random joint states");
  });
  check("circuits", "double occupations never survive detection", [&] {
    const Circuit c = build_fusion_circuit();
    int bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
      SlotValues v;
      v.qubits["psi"] = rng.qubit();
      v.qubits["phi"] = rng.qubit();
      for (const auto& o : run_circuit(c, c.prepare(v))) {
        for (const auto& [basis, amp] : o.state.terms()) {
          for (const auto& [key, n] : basis.entries()) bad += n > 1;
        }
      }
    }
    return Outcome{bad == 0, std::to_string(bad) + " multiply occupied modes in kept terms"};
  });
  check("circuits", "external entanglement with a spectator survives fusion", [&] {
    Worst w(tol);
    const Circuit c = build_fusion_circuit();
    for (int trial = 0; trial < 20; ++trial) {
      QubitState psi = rng.qubit();
      Complex u = rng.gaussian();
      Complex v = rng.gaussian();
      double n = std::sqrt(std::norm(u) + std::norm(v));
      u /= n;
      v /= n;
      // psi on t, (u H_c H_s + v V_c V_s) between control and spectator.
      PureState in = create_photon(PureState::vacuum(), "a", Polarization::H);
      PureState psi_t = create_photon(in, "t", Polarization::H)
                            .scaled(psi.a0())
                            .plus(create_photon(in, "t", Polarization::V), psi.a1());
      PureState joint =
          create_photon(create_photon(psi_t, "c", Polarization::H), "s", Polarization::H)
              .scaled(u)
              .plus(create_photon(create_photon(psi_t, "c", Polarization::V), "s", Polarization::V), v);
      PureState out = project(evolve(c, joint), c.patterns().front()).state;
      PureState expected;
      const Complex cs[2] = {u, v};
      for (int sbit = 0; sbit < 2; ++sbit) {
        for (int tbit = 0; tbit < 2; ++tbit) {
          PureState term = create_photon(
              create_photon(create_photon(PureState::vacuum(), "a", Polarization::H), "c",
                            Polarization::H),
              "s", static_cast<Polarization>(sbit));
          term = create_photon(term, tbit ? "t2" : "t1", static_cast<Polarization>(sbit));
          expected = expected.plus(term, cs[sbit] * psi[tbit]);
        }
      }
      w.add(1.0 - fidelity(out, expected));
    }
    return w.outcome("20 random states");
  });
  check("circuits", "fission heralds the split state with probability 1/32 per branch", [&] {
    Worst prob(1e-12);
    Worst fid(tol);
    for (int trial = 0; trial < 50; ++trial) {
      QuditState4 chi = rng.qudit();
      for (const auto& o : run_fission(chi)) {
        prob.add(o.probability - 1.0 / 32.0);
        fid.add(1.0 - fidelity(split_qubits(apply_fission_feed_forward(o)), chi));
      }
    }
    Outcome a = prob.outcome("probability");
    Outcome b = fid.outcome("fidelity");
    return Outcome{a.passed && b.passed, a.detail + "; " + b.detail};
  });
  check("circuits", "fission after fusion restores the two qubits", [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      QubitState psi = rng.qubit();
      QubitState phi = rng.qubit();
      QuditState4 fused = fused_qudit(run_fusion(psi, phi).front().state);
      QuditState4 back = split_qubits(run_fission(fused).front().state);
      w.add(1.0 - fidelity(back, QuditState4::product(psi, phi)));
    }
    return w.outcome("50 product inputs");
  });
  check("circuits", "circuit text round trip", [&] {
    bool ok = parse_circuit(to_dsl(build_fusion_circuit())) == build_fusion_circuit() &&
              parse_circuit(to_dsl(build_fission_circuit())) == build_fission_circuit();
    return Outcome{ok, ok ? "fusion and fission layouts" : "layout differs after round trip"};
  });

  // logical-gates -------------------------------------------------------------
  const std::string eta_note =
      options.inject_eta_mismatch ? " (eta mismatch injected: 1 vs 0.6)" : "";
  check("logical-gates", "rail fusion matches the optical fusion" + eta_note, [&] {
    Worst w(tol);
    for (int trial = 0; trial < 100; ++trial) {
      QubitState psi = rng.qubit();
      QubitState phi = rng.qubit();
      AbstractFusion f = abstract_fuse(psi, phi, eta_pair);
      QuditState4 optical = fused_qudit(run_fusion(psi, phi).front().state);
      w.add(1.0 - fidelity(f.plus.state, optical));
      w.add(1.0 - fidelity(correct_minus_branch(f.minus.state), optical));
    }
    return w.outcome("100 random inputs");
  });
  check("logical-gates", "rail fusion is independent of a shared eta" + eta_note, [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      QubitState psi = rng.qubit();
      QubitState phi = rng.qubit();
      Complex eta = std::polar(rng.uniform(0.1, 1.0), rng.uniform(-M_PI, M_PI));
      EtaPair pair = options.inject_eta_mismatch ? EtaPair{eta, 0.6 * eta} : EtaPair{eta, eta};
      w.add(1.0 - fidelity(abstract_fuse(psi, phi, pair).plus.state, QuditState4::product(psi, phi)));
    }
    return w.outcome("50 random eta");
  });
  check("logical-gates", "rail fission undoes rail fusion" + eta_note, [&] {
    Worst w(tol);
    for (int trial = 0; trial < 50; ++trial) {
      QubitState psi = rng.qubit();
      QubitState phi = rng.qubit();
      QuditState4 fused = abstract_fuse(psi, phi, eta_pair).plus.state;
      w.add(1.0 - fidelity(abstract_fission(fused, eta_pair).state, QuditState4::product(psi, phi)));
      QuditState4 chi = rng.qudit();
      w.add(1.0 - fidelity(abstract_fission(chi, eta_pair).state, chi));
    }
    return w.outcome("50 product and 50 entangled inputs");
  });
  check("logical-gates", "iterated fusion builds the tensor product", [&] {
    Worst w(tol);
    auto tensor = [](const std::vector<QubitState>& qs) {
      std::vector<Complex> out{1.0};
      for (const auto& q : qs) {
        std::vector<Complex> next;
        for (Complex a : out) {
          next.push_back(a * q[0]);
          next.push_back(a * q[1]);
        }
        out = next;
      }
      return out;
    };
    auto compare = [&](const std::vector<QubitState>& qs) {
      auto got = abstract_fuse_iterated(qs).amps;
      auto want = tensor(qs);
      Complex overlap{};
      for (std::size_t i = 0; i < want.size(); ++i) overlap += std::conj(want[i]) * got[i];
      w.add(1.0 - std::norm(overlap));
    };
    for (int n = 1; n <= kDefaultMaxFusedQubits; ++n) {
      for (int bits = 0; bits < (1 << n); ++bits) {
        std::vector<QubitState> qs;
        for (int k = n - 1; k >= 0; --k) qs.push_back(basis_qubit((bits >> k) & 1));
        compare(qs);
      }
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<QubitState> qs;
        for (int k = 0; k < n; ++k) qs.push_back(rng.qubit());
        compare(qs);
      }
    }
    return w.outcome("all basis inputs and 20 random inputs for n = 1..4");
  });

  // distinguishability --------------------------------------------------------
  check("distinguishability", "r(p) runs monotonically from 0 to 1", [&] {
    bool ok = DistModel(0.0).r() == 0.0 && DistModel(1.0).r() == 1.0;
    double prev = -1.0;
    for (double p : grid21()) {
      double r = DistModel(p).r();
      ok = ok && r >= prev;
      prev = r;
    }
    return Outcome{ok, "r(0.77) = " + format_sig(DistModel(0.77).r(), 6)};
  });
  check("distinguishability", "simulated matrices are row-stochastic", [&] {
    Worst w(1e-12);
    for (BasisId b : kAllBases) {
      for (double p : grid21()) {
        ProbabilityMatrix m = simulate_basis_matrix(b, p);
        for (int i = 0; i < 4; ++i) w.add(m.row_sum(i) - 1.0);
      }
    }
    return w.outcome("4 bases x 21 values of p");
  });
  for (BasisId b : kAllBases) {
    const std::string name = std::string(to_string(b));
    check("distinguishability", "basis " + name + " simulation equals the closed form", [&, b] {
      Worst w(tol);
      for (double p : kPGrid) w.add(simulate_basis_matrix(b, p).max_abs_diff(closed_form_matrix(b, p)));
      return w.outcome("p in {0, 0.25, 0.5, 0.77, 1}");
    });
  }
  check("distinguishability", "printed basis i/ii off-diagonals are not row-stochastic", [&] {
    double s1 = closed_form_matrix(BasisId::I, 0.77, MatrixReading::AsPrinted).row_sum(0);
    double s2 = closed_form_matrix(BasisId::II, 0.77, MatrixReading::AsPrinted).row_sum(0);
    bool ok = std::abs(s1 - 1.0) > 1e-3 && std::abs(s2 - 1.0) > 1e-3;
    return Outcome{ok, "row sums at p=0.77: " + format_sig(s1, 6) + ", " + format_sig(s2, 6)};
  });
  check("distinguishability", "all bases give the identity at p = 1", [&] {
    Worst w(tol);
    for (BasisId b : kAllBases) w.add(simulate_basis_matrix(b, 1.0).max_abs_diff(ProbabilityMatrix::identity()));
    return w.outcome("4 bases");
  });
  check("distinguishability", "diagonal entries grow with p", [&] {
    int violations = 0;
    for (BasisId b : kAllBases) {
      ProbabilityMatrix prev = simulate_basis_matrix(b, 0.0);
      for (double p : grid21()) {
        ProbabilityMatrix m = simulate_basis_matrix(b, p);
        for (int i = 0; i < 4; ++i) violations += m(i, i) < prev(i, i) - 1e-12;
        prev = m;
      }
    }
    return Outcome{violations == 0, std::to_string(violations) + " decreasing steps"};
  });
  check("distinguishability", "mean diagonal equals (3+p)/(9-5p)", [&] {
    Worst w(tol);
    for (double p : grid21()) w.add(simulated_mean_fidelity(p) - average_fidelity(p));
    return w.outcome("21 values of p; at p=0.77 simulated " + format_sig(simulated_mean_fidelity(0.77), 6) +
                     " vs formula " + format_sig(average_fidelity(0.77), 6));
  });
  check("distinguishability", "logical-basis rows HV and VH ignore the ancilla", [&] {
    ProbabilityMatrix m = simulate_basis_matrix(BasisId::I, 0.0);
    double dev = std::abs(m(1, 1) - 1.0) + std::abs(m(2, 2) - 1.0);
    return Outcome{dev <= tol, "deviation " + format_sig(dev, 3)};
  });
  check("distinguishability", "feed-forward branches agree at p = 1", [&] {
    Worst w(tol);
    for (BasisId b : kAllBases) {
      ProbabilityMatrix base = simulate_basis_matrix(b, 1.0, 0);
      for (int br = 1; br < 4; ++br) w.add(simulate_basis_matrix(b, 1.0, br).max_abs_diff(base));
    }
    return w.outcome("3 corrected branches x 4 bases");
  });
  check("distinguishability", "fit recovers p from the basis ii closed form", [&] {
    Worst w(1e-3);
    for (double p : {0.3, 0.5, 0.77, 0.9}) w.add(fit_p(closed_form_matrix(BasisId::II, p), BasisId::II) - p);
    w.add(fit_p(ProbabilityMatrix::identity(), BasisId::II) - 1.0);
    return w.outcome("p in {0.3, 0.5, 0.77, 0.9} and identity data");
  });
  check("distinguishability", "similarity is normalized and scale invariant", [&] {
    ProbabilityMatrix::Entries ones{};
    for (auto& row : ones) row.fill(0.25);
    ProbabilityMatrix uniform(ones);
    ProbabilityMatrix d = simulate_basis_matrix(BasisId::III, 0.5);
    double self = similarity(d, d);
    double iu = similarity(ProbabilityMatrix::identity(), uniform);
    double scaled = similarity(d.scaled(3.0), uniform.scaled(0.5)) - similarity(d, uniform);
    bool ok = std::abs(self - 1.0) <= 1e-12 && std::abs(iu - 0.25) <= 1e-12 && std::abs(scaled) <= 1e-12;
    return Outcome{ok, "S(D,D)=" + format_sig(self, 12) + ", S(1,U)=" + format_sig(iu, 12)};
  });
  return results;
}

ExperimentReport verify_report(const std::vector<CheckResult>& results,
                               const VerifyOptions& options) {
  ExperimentReport r;
  r.name = "verify";
  r.parameters = {{"seed", std::to_string(options.seed)}};
  if (options.inject_eta_mismatch) r.parameters.push_back({"inject-eta-mismatch", ""});
  Table t{"checks", {"status", "module", "check", "detail"}, {}};
  int failed = 0;
  for (const auto& c : results) {
    failed += !c.passed;
    t.rows.push_back({std::string(c.passed ? "PASS" : "FAIL"), c.module, c.name, c.detail});
  }
  r.tables.push_back(std::move(t));
  r.notes.push_back(std::to_string(results.size() - static_cast<std::size_t>(failed)) + " of " +
                    std::to_string(results.size()) + " checks passed, tolerance " +
                    format_sig(options.tolerance, 3));
  return r;
}

}  // namespace fockfuse
