#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "zkprov/circuit.hpp"
#include "zkprov/field.hpp"

namespace zkprov::testsupport {

/// Scratch directory under the system temp root, removed recursively on
/// destruction so parallel test runs never collide.
class TempDir {
public:
    explicit TempDir(std::string_view tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

FieldPtr field7();
FieldPtr field97();

/// Private input a (wire 2), public output t (wire 1), constraint t = a*a.
/// Solver: Mul(1, 2, 2). x=[], x'=[3] gives witness [1,9,3], outputs [9].
CircuitArtifact square_circuit(const FieldPtr& field);

/// Public input x (wire 1), private a (wire 2), internal t (wire 3).
/// Solver: Mul(3, 2, 2); AssertEq(3, 1). Constraint: a*a = x.
CircuitArtifact square_root_circuit(const FieldPtr& field);

/// m constraints pinning internal wires 1..m to fixed values (no inputs or
/// outputs). The honest witness is unique, so flipping chosen wires violates
/// exactly the chosen constraints; the soundness Monte-Carlo builds on it.
struct PinnedWiresCircuit {
    CircuitArtifact ecs;
    std::vector<BigInt> honest_values; // values of wires 1..m
};
PinnedWiresCircuit pinned_wires_circuit(std::uint32_t m, const FieldPtr& field,
                                        std::uint64_t value_seed);

/// Caps for the random-circuit generator. Oracle mode keeps circuits small
/// enough for exhaustive assignment enumeration over p=7.
struct GeneratorLimits {
    std::uint32_t max_public_inputs = 1;
    std::uint32_t max_private_inputs = 2;
    std::uint32_t max_outputs = 2;
    std::uint32_t max_internal_ops = 8;
    bool allow_unsatisfiable = false;
};

struct GeneratedInstance {
    CircuitArtifact ecs;
    std::vector<BigInt> public_inputs;
    std::vector<BigInt> private_inputs;
    bool satisfiable = true;               // per the generator's tracked values
    std::vector<BigInt> expected_outputs;  // tracked output values
};

/// Random straight-line circuit plus inputs. Every solver instruction has a
/// mirroring constraint, so the witness extending (1, x, x') is unique and
/// satisfiability is known by construction.
GeneratedInstance generate_instance(std::mt19937_64& rng, const FieldPtr& field,
                                    const GeneratorLimits& limits);

/// Constraint check reimplemented on plain 64-bit arithmetic; usable only
/// for small moduli (terms must not overflow), which is what the
/// enumeration oracle needs.
bool oracle_satisfies(const CircuitArtifact& ecs, const std::vector<std::uint64_t>& w,
                      std::uint64_t p);

/// Exhaustive-agreement check of solve_witness against assignment
/// enumeration over p=7: for every private-input tuple, the solver succeeds
/// iff exactly one satisfying assignment extends (1, x, x'), and on success
/// the witness equals it. Returns a failure description, empty on agreement.
std::string check_oracle_agreement(const GeneratedInstance& instance);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view body);

/// Env var lookup that fails loudly; test binaries get their tool paths
/// injected by ctest.
std::string require_env(const char* name);

} // namespace zkprov::testsupport
