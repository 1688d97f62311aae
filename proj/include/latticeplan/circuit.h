#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace latticeplan {

using Complex = std::complex<double>;

/// Dense simulation is capped here. The largest construction we verify uses 12 qubits.
inline constexpr std::size_t kMaxQubits = 16;
inline constexpr std::size_t kMaxMeasurements = 16;

/// Dense amplitude vector. Qubit k is bit k of the amplitude index (little endian).
class StateVector {
   public:
    /// The all-zeros state on `num_qubits` qubits.
    explicit StateVector(std::size_t num_qubits);

    static StateVector basis(std::size_t num_qubits, std::uint64_t index);
    /// Takes ownership of amplitudes; size must be a power of two and the norm must be 1.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> mutable_amplitudes() { return amplitudes_; }
    Complex operator[](std::size_t index) const { return amplitudes_[index]; }
    double norm_squared() const;

    bool operator==(const StateVector &other) const = default;

   private:
    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);
    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

enum class GateKind { X, Z, H, S, CX, CZ, SWAP, CCZ };

std::size_t gate_arity(GateKind kind);
std::string_view gate_name(GateKind kind);
std::optional<GateKind> parse_gate_name(std::string_view name);

struct GateSpec {
    GateKind kind;
    std::vector<std::size_t> targets;

    bool operator==(const GateSpec &other) const = default;
};

enum class Basis { Z, X };
enum class Pauli { X, Z };

/// Boolean function of measurement records, kept as a GF(2) polynomial: an XOR of
/// monomials, each monomial an AND of record indices. The empty monomial is the constant 1.
class Condition {
   public:
    using Monomial = std::vector<std::size_t>;

    Condition() = default;  // constant 0
    static Condition constant(bool value);
    static Condition record(std::size_t index);
    /// `if_false` when `selector` is 0, otherwise `if_true`.
    static Condition select(const Condition &selector, const Condition &if_false, const Condition &if_true);

    Condition operator^(const Condition &other) const;
    Condition operator&(const Condition &other) const;

    bool evaluate(std::span<const std::uint8_t> records) const;
    /// Largest record index mentioned, if any.
    std::optional<std::size_t> max_record() const;
    Condition shifted(std::size_t offset) const;
    bool is_zero() const { return monomials_.empty(); }
    const std::vector<Monomial> &monomials() const { return monomials_; }

    bool operator==(const Condition &other) const = default;

   private:
    explicit Condition(std::vector<Monomial> monomials);
    std::vector<Monomial> monomials_;  // sorted, unique
};

/// Where an operation physically happens; used to audit the AutoCCZ consumption site.
enum class Site { Unspecified, Creation, Consumption, Fixup };
std::string_view site_name(Site site);
std::optional<Site> parse_site_name(std::string_view name);

struct GateOp {
    GateSpec gate;
    std::optional<Condition> control;  // classically controlled when set

    bool operator==(const GateOp &other) const = default;
};

/// Destructive single-qubit measurement. The qubit is left in |outcome> in the computational
/// basis whichever basis was measured. When `swap_basis` is set and evaluates to 1, the
/// other basis is used instead of `basis`.
struct MeasureOp {
    std::size_t qubit;
    Basis basis = Basis::Z;
    std::optional<Condition> swap_basis;

    bool operator==(const MeasureOp &other) const = default;
};

/// Pauli-frame update: XOR `pauli` on `qubit` into the tracked frame when `condition` holds.
struct FrameOp {
    Pauli pauli;
    std::size_t qubit;
    Condition condition;

    bool operator==(const FrameOp &other) const = default;
};

using Operation = std::variant<GateOp, MeasureOp, FrameOp>;

struct Step {
    Operation op;
    Site site = Site::Unspecified;

    bool operator==(const Step &other) const = default;
};

enum class InitialState { Zero, Plus };

/// Ordered operation list with measurement records numbered in program order.
/// Appending validates targets and that every condition only reads earlier records.
class Circuit {
   public:
    explicit Circuit(std::size_t num_qubits);
    Circuit(std::size_t num_qubits, std::vector<InitialState> initial_states);

    std::size_t num_qubits() const { return num_qubits_; }
    const std::vector<InitialState> &initial_states() const { return initial_states_; }
    void set_initial_state(std::size_t qubit, InitialState state);
    const std::vector<Step> &steps() const { return steps_; }
    std::size_t measurement_count() const { return measurement_count_; }

    void gate(GateKind kind, std::vector<std::size_t> targets, Site site = Site::Unspecified);
    void controlled_gate(GateKind kind, std::vector<std::size_t> targets, Condition control,
                         Site site = Site::Unspecified);
    /// Returns the record index of the new measurement.
    std::size_t measure(std::size_t qubit, Basis basis = Basis::Z, Site site = Site::Unspecified);
    std::size_t measure_adaptive(std::size_t qubit, Basis basis_if_false, Condition swap_basis,
                                 Site site = Site::Unspecified);
    void frame(Pauli pauli, std::size_t qubit, Condition condition, Site site = Site::Unspecified);

    void append(const Step &step);
    /// Appends `other` with its qubit i mapped to `qubit_map[i]`; its record indices are
    /// shifted past this circuit's existing records.
    void append_circuit(const Circuit &other, std::span<const std::size_t> qubit_map);

    bool operator==(const Circuit &other) const = default;

   private:
    void check_targets(std::span<const std::size_t> targets) const;
    void check_condition(const Condition &condition) const;

    std::size_t num_qubits_;
    std::vector<InitialState> initial_states_;
    std::vector<Step> steps_;
    std::size_t measurement_count_ = 0;
};

/// Pending Pauli corrections. The physical state is X^x Z^z applied to the simulated state.
struct PauliFrame {
    std::vector<std::uint8_t> x_bits;
    std::vector<std::uint8_t> z_bits;

    explicit PauliFrame(std::size_t num_qubits = 0) : x_bits(num_qubits, 0), z_bits(num_qubits, 0) {}

    void toggle(Pauli pauli, std::size_t qubit);
    PauliFrame &operator^=(const PauliFrame &other);
    /// Rewrites the frame as if `gate` had been applied after it (G P G^dagger).
    /// Throws ContractError when the result is not a Pauli (CCZ acting on an X component).
    void conjugate_by(const GateSpec &gate);
    bool is_identity() const;

    bool operator==(const PauliFrame &other) const = default;
};

}  // namespace latticeplan
