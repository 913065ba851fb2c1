#include "support.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "zkprov/errors.hpp"

namespace zkprov::testsupport {

namespace fs = std::filesystem;

TempDir::TempDir(std::string_view tag) {
    std::string templ = (fs::temp_directory_path() / std::string(tag)).string() + ".XXXXXX";
    if (!::mkdtemp(templ.data())) {
        throw std::runtime_error("mkdtemp failed for " + templ);
    }
    path_ = templ;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

FieldPtr field7() {
    static FieldPtr f = Field::make(7);
    return f;
}

FieldPtr field97() {
    static FieldPtr f = Field::make(97);
    return f;
}

namespace {

/// Canonical linear combination: coefficients reduced, same-wire terms
/// merged, zeros dropped, ascending by wire.
LinearCombination mk_lc(const Field& field,
                        std::initializer_list<std::pair<WireIndex, BigInt>> terms) {
    std::map<WireIndex, BigInt> acc;
    for (const auto& [wire, coeff] : terms) {
        auto [it, fresh] = acc.try_emplace(wire, field.reduce(coeff));
        if (!fresh) {
            it->second = field.add(it->second, field.reduce(coeff));
        }
    }
    LinearCombination lc;
    for (const auto& [wire, coeff] : acc) {
        if (coeff != 0) {
            lc.terms.emplace_back(wire, coeff);
        }
    }
    return lc;
}

BigInt random_element(std::mt19937_64& rng, const Field& field) {
    // Uniform enough for tests: wide draw reduced into the field.
    BigInt v = 0;
    for (int i = 0; i < 5; ++i) {
        v = (v << 64) | BigInt(rng());
    }
    return field.reduce(v);
}

} // namespace

CircuitArtifact square_circuit(const FieldPtr& field) {
    CircuitArtifact ecs;
    ecs.field = field;
    ecs.num_public_inputs = 0;
    ecs.num_public_outputs = 1;
    ecs.num_private_inputs = 1;
    ecs.num_wires = 3; // 0 const, 1 output t, 2 private a
    ecs.constraints.push_back(
        {mk_lc(*field, {{2, 1}}), mk_lc(*field, {{2, 1}}), mk_lc(*field, {{1, 1}})});
    ecs.solver.push_back(MulOp{1, 2, 2});
    ecs.name = "square";
    ecs.validate();
    return ecs;
}

CircuitArtifact square_root_circuit(const FieldPtr& field) {
    CircuitArtifact ecs;
    ecs.field = field;
    ecs.num_public_inputs = 1;
    ecs.num_public_outputs = 0;
    ecs.num_private_inputs = 1;
    ecs.num_wires = 4; // 0 const, 1 public x, 2 private a, 3 internal t
    ecs.constraints.push_back(
        {mk_lc(*field, {{2, 1}}), mk_lc(*field, {{2, 1}}), mk_lc(*field, {{1, 1}})});
    ecs.solver.push_back(MulOp{3, 2, 2});
    ecs.solver.push_back(AssertEqOp{3, 1});
    ecs.name = "square-root";
    ecs.validate();
    return ecs;
}

PinnedWiresCircuit pinned_wires_circuit(std::uint32_t m, const FieldPtr& field,
                                        std::uint64_t value_seed) {
    PinnedWiresCircuit out;
    CircuitArtifact& ecs = out.ecs;
    ecs.field = field;
    ecs.num_wires = m + 1;
    ecs.name = "pinned-wires-m" + std::to_string(m);
    std::mt19937_64 rng(value_seed);
    for (std::uint32_t i = 1; i <= m; ++i) {
        BigInt v = random_element(rng, *field);
        out.honest_values.push_back(v);
        ecs.solver.push_back(ConstOp{i, v});
        // w_i * 1 = v_i
        ecs.constraints.push_back(
            {mk_lc(*field, {{i, 1}}), mk_lc(*field, {{0, 1}}), mk_lc(*field, {{0, v}})});
    }
    ecs.validate();
    return out;
}

GeneratedInstance generate_instance(std::mt19937_64& rng, const FieldPtr& field,
                                    const GeneratorLimits& limits) {
    GeneratedInstance out;
    CircuitArtifact& ecs = out.ecs;
    ecs.field = field;
    const Field& f = *field;

    std::uint32_t npub = limits.max_public_inputs ? rng() % (limits.max_public_inputs + 1) : 0;
    std::uint32_t npriv = 1 + rng() % limits.max_private_inputs;
    std::uint32_t nout = 1 + rng() % limits.max_outputs;
    std::uint32_t ops = 1 + rng() % limits.max_internal_ops;

    ecs.num_public_inputs = npub;
    ecs.num_public_outputs = nout;
    ecs.num_private_inputs = npriv;

    // Tracked values per wire; `known` lists wires usable as sources.
    std::map<WireIndex, BigInt> value;
    std::vector<WireIndex> known;
    value[0] = 1;
    known.push_back(0);
    for (std::uint32_t i = 0; i < npub; ++i) {
        BigInt v = random_element(rng, f);
        out.public_inputs.push_back(v);
        value[ecs.public_input_wire(i)] = v;
        known.push_back(ecs.public_input_wire(i));
    }
    for (std::uint32_t i = 0; i < npriv; ++i) {
        BigInt v = random_element(rng, f);
        out.private_inputs.push_back(v);
        value[ecs.private_input_wire(i)] = v;
        known.push_back(ecs.private_input_wire(i));
    }

    WireIndex next_internal = ecs.first_internal_wire();
    auto pick = [&]() -> WireIndex { return known[rng() % known.size()]; };

    // Every instruction gets a mirroring constraint, so the witness
    // extending (1, x, x') is pinned wire by wire.
    auto emit_const = [&](WireIndex t, const BigInt& v) {
        value[t] = v;
        ecs.solver.push_back(ConstOp{t, v});
        ecs.constraints.push_back(
            {mk_lc(f, {{0, v}}), mk_lc(f, {{0, 1}}), mk_lc(f, {{t, 1}})});
    };
    auto emit_add = [&](WireIndex t, WireIndex l, WireIndex r) {
        value[t] = f.add(value[l], value[r]);
        ecs.solver.push_back(AddOp{t, l, r});
        ecs.constraints.push_back(
            {mk_lc(f, {{l, 1}, {r, 1}}), mk_lc(f, {{0, 1}}), mk_lc(f, {{t, 1}})});
    };
    auto emit_sub = [&](WireIndex t, WireIndex l, WireIndex r) {
        value[t] = f.sub(value[l], value[r]);
        ecs.solver.push_back(SubOp{t, l, r});
        ecs.constraints.push_back(
            {mk_lc(f, {{l, 1}, {r, f.neg(1)}}), mk_lc(f, {{0, 1}}), mk_lc(f, {{t, 1}})});
    };
    auto emit_mul = [&](WireIndex t, WireIndex l, WireIndex r) {
        value[t] = f.mul(value[l], value[r]);
        ecs.solver.push_back(MulOp{t, l, r});
        ecs.constraints.push_back(
            {mk_lc(f, {{l, 1}}), mk_lc(f, {{r, 1}}), mk_lc(f, {{t, 1}})});
    };
    auto emit_inv = [&](WireIndex t, WireIndex s) {
        value[t] = value[s] == 0 ? BigInt(0) : f.inv(value[s]);
        ecs.solver.push_back(InvOp{t, s});
        ecs.constraints.push_back(
            {mk_lc(f, {{s, 1}}), mk_lc(f, {{t, 1}}), mk_lc(f, {{0, 1}})});
    };

    for (std::uint32_t i = 0; i < ops; ++i) {
        WireIndex t = next_internal++;
        switch (rng() % 5) {
        case 0: emit_const(t, random_element(rng, f)); break;
        case 1: emit_add(t, pick(), pick()); break;
        case 2: emit_sub(t, pick(), pick()); break;
        case 3: emit_mul(t, pick(), pick()); break;
        default: {
            WireIndex s = pick();
            if (value[s] == 0) {
                s = 0; // constant one is always invertible
            }
            emit_inv(t, s);
            break;
        }
        }
        known.push_back(t);
    }

    for (std::uint32_t i = 0; i < nout; ++i) {
        WireIndex o = ecs.output_wire(i);
        if (rng() % 2) {
            emit_add(o, pick(), pick());
        } else {
            emit_mul(o, pick(), pick());
        }
        out.expected_outputs.push_back(value[o]);
    }

    // Satisfied assertion: equal-valued wires when available, else reflexive.
    if (rng() % 2) {
        WireIndex u = pick();
        WireIndex v = u;
        for (WireIndex cand : known) {
            if (cand != u && value[cand] == value[u]) {
                v = cand;
                break;
            }
        }
        ecs.solver.push_back(AssertEqOp{u, v});
        ecs.constraints.push_back(
            {mk_lc(f, {{u, 1}}), mk_lc(f, {{0, 1}}), mk_lc(f, {{v, 1}})});
    }

    if (limits.allow_unsatisfiable && rng() % 3 == 0) {
        out.satisfiable = false;
        WireIndex zero_wire = ecs.num_wires; // sentinel: none
        for (WireIndex cand : known) {
            if (value[cand] == 0) {
                zero_wire = cand;
                break;
            }
        }
        if (zero_wire < ecs.num_wires && rng() % 2) {
            // Inversion of a pinned zero: solver throws, constraint 0*t=1
            // has no solution.
            emit_inv(next_internal++, zero_wire);
        } else {
            // Assert two wires with different pinned values equal.
            WireIndex u = pick();
            WireIndex v = u;
            for (WireIndex cand : known) {
                if (value[cand] != value[u]) {
                    v = cand;
                    break;
                }
            }
            if (v == u) {
                WireIndex t = next_internal++;
                emit_const(t, f.add(value[u], 1));
                v = t;
            }
            ecs.solver.push_back(AssertEqOp{u, v});
            ecs.constraints.push_back(
                {mk_lc(f, {{u, 1}}), mk_lc(f, {{0, 1}}), mk_lc(f, {{v, 1}})});
        }
    }

    ecs.num_wires = next_internal;
    std::ostringstream name;
    name << "gen-" << std::hex << rng();
    ecs.name = name.str();
    ecs.validate();
    return out;
}

bool oracle_satisfies(const CircuitArtifact& ecs, const std::vector<std::uint64_t>& w,
                      std::uint64_t p) {
    auto eval = [&](const LinearCombination& lc) {
        std::uint64_t sum = 0;
        for (const auto& [wire, coeff] : lc.terms) {
            sum = (sum + coeff.convert_to<std::uint64_t>() * w[wire]) % p;
        }
        return sum;
    };
    for (const Constraint& c : ecs.constraints) {
        if ((eval(c.a) * eval(c.b)) % p != eval(c.c)) {
            return false;
        }
    }
    return true;
}

std::string check_oracle_agreement(const GeneratedInstance& instance) {
    const CircuitArtifact& ecs = instance.ecs;
    const std::uint64_t p = ecs.field->modulus().convert_to<std::uint64_t>();
    const std::uint32_t npub = ecs.num_public_inputs;
    const std::uint32_t npriv = ecs.num_private_inputs;
    const WireIndex priv_base = ecs.private_input_wire(0);

    // Wires 0..npub are fixed by (1, x); everything else is enumerated,
    // with the private slots pinned per tuple.
    std::vector<WireIndex> enumerated;
    for (WireIndex wire = 1 + npub; wire < ecs.num_wires; ++wire) {
        if (wire < priv_base || wire >= priv_base + npriv) {
            enumerated.push_back(wire);
        }
    }

    std::vector<std::uint64_t> w(ecs.num_wires, 0);
    w[0] = 1;
    for (std::uint32_t i = 0; i < npub; ++i) {
        w[1 + i] = instance.public_inputs[i].convert_to<std::uint64_t>();
    }

    std::uint64_t tuple_count = 1;
    for (std::uint32_t i = 0; i < npriv; ++i) {
        tuple_count *= p;
    }
    for (std::uint64_t tuple = 0; tuple < tuple_count; ++tuple) {
        std::vector<BigInt> priv;
        std::uint64_t t = tuple;
        for (std::uint32_t i = 0; i < npriv; ++i) {
            w[priv_base + i] = t % p;
            priv.emplace_back(t % p);
            t /= p;
        }

        bool solver_ok = false;
        SolveResult solved;
        try {
            solved = solve_witness(ecs, instance.public_inputs, priv);
            solver_ok = true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::kUnsatisfiableInput &&
                e.code() != ErrorCode::kDivisionByZero) {
                return "solver threw unexpected error: " + std::string(e.what());
            }
        }

        // Exhaustive scan of the enumerated wires.
        std::uint64_t combos = 1;
        for (std::size_t i = 0; i < enumerated.size(); ++i) {
            combos *= p;
        }
        std::uint64_t hits = 0;
        std::vector<std::uint64_t> satisfying;
        for (std::uint64_t combo = 0; combo < combos; ++combo) {
            std::uint64_t v = combo;
            for (WireIndex wire : enumerated) {
                w[wire] = v % p;
                v /= p;
            }
            if (oracle_satisfies(ecs, w, p)) {
                if (++hits == 1) {
                    satisfying = w;
                }
            }
        }

        std::string where = " (circuit " + ecs.name + ", tuple " + std::to_string(tuple) + ")";
        if (solver_ok != (hits > 0)) {
            return std::string("solver and enumeration disagree on satisfiability") + where;
        }
        if (solver_ok) {
            if (hits != 1) {
                return "constraints admit " + std::to_string(hits) +
                       " assignments, expected exactly 1" + where;
            }
            for (WireIndex wire = 0; wire < ecs.num_wires; ++wire) {
                if (solved.witness.values[wire].convert_to<std::uint64_t>() !=
                    satisfying[wire]) {
                    return "solver witness differs from the satisfying assignment at wire " +
                           std::to_string(wire) + where;
                }
            }
            for (std::uint32_t i = 0; i < ecs.num_public_outputs; ++i) {
                if (solved.outputs[i] != solved.witness.values[ecs.output_wire(i)]) {
                    return std::string("outputs do not match the output wires") + where;
                }
            }
        }
    }
    return "";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

void write_file(const fs::path& path, std::string_view body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string require_env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) {
        throw std::runtime_error(std::string(name) + " is not set; run through ctest");
    }
    return v;
}

} // namespace zkprov::testsupport
