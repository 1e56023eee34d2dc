#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hhqec {

/// Packed, dynamically sized bit vector.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    bool operator[](std::size_t i) const { return get(i); }

    BitVector& operator^=(const BitVector& other);
    BitVector& operator&=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    bool operator==(const BitVector& other) const = default;

    bool any() const;
    std::size_t popcount() const;
    /// Parity of popcount(this & other).
    bool dot(const BitVector& other) const;
    void clear();

    std::vector<std::size_t> ones() const;
    std::string to_string() const;
    static BitVector from_string(const std::string& bits);

    const std::vector<std::uint64_t>& words() const { return words_; }

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Single-qubit Pauli, encoded as (x bit) | (z bit << 1).
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline bool has_x(Pauli p) { return static_cast<std::uint8_t>(p) & 1u; }
inline bool has_z(Pauli p) { return static_cast<std::uint8_t>(p) & 2u; }
inline Pauli pauli_from_bits(bool x, bool z) {
    return static_cast<Pauli>(static_cast<std::uint8_t>(x) | (static_cast<std::uint8_t>(z) << 1));
}
char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Phase-free Pauli operator on a register of n qubits.
///
/// Products are XORs of the x and z components, so X*X = I and X*Z = Y up to phase.
class PauliFrame {
  public:
    PauliFrame() = default;
    explicit PauliFrame(std::size_t n) : x_(n), z_(n) {}

    std::size_t size() const { return x_.size(); }
    Pauli get(std::size_t q) const { return pauli_from_bits(x_.get(q), z_.get(q)); }
    void set(std::size_t q, Pauli p) {
        x_.set(q, has_x(p));
        z_.set(q, has_z(p));
    }
    /// Multiplies qubit q by p.
    void apply(std::size_t q, Pauli p) {
        if (has_x(p)) x_.flip(q);
        if (has_z(p)) z_.flip(q);
    }

    const BitVector& x() const { return x_; }
    const BitVector& z() const { return z_; }
    BitVector& x() { return x_; }
    BitVector& z() { return z_; }

    bool is_identity() const { return !x_.any() && !z_.any(); }
    std::size_t weight() const;
    /// True when the two operators anticommute.
    bool anticommutes(const PauliFrame& other) const;

    bool operator==(const PauliFrame& other) const = default;

    /// Dense string such as "IXZY".
    std::string to_string() const;
    static PauliFrame from_string(const std::string& s);

  private:
    BitVector x_;
    BitVector z_;
};

/// Phase-free product. Throws std::invalid_argument on register mismatch.
PauliFrame compose(const PauliFrame& a, const PauliFrame& b);

/// Sparse Pauli operator: sorted (qubit, Pauli) terms with no identity entries.
struct PauliOperator {
    std::vector<std::pair<std::size_t, Pauli>> terms;

    std::size_t weight() const { return terms.size(); }
    PauliFrame to_frame(std::size_t n) const;
    static PauliOperator from_frame(const PauliFrame& f);
    bool operator==(const PauliOperator& other) const = default;
};

}  // namespace hhqec
