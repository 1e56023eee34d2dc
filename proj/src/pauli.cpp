#include "hhqec/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace hhqec {

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector size mismatch");
    }
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector size mismatch");
    }
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
}

bool BitVector::any() const {
    for (auto w : words_) {
        if (w) return true;
    }
    return false;
}

std::size_t BitVector::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

bool BitVector::dot(const BitVector& other) const {
    if (other.size_ != size_) {
        throw std::invalid_argument("BitVector size mismatch");
    }
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & other.words_[k];
    return std::popcount(acc) & 1;
}

void BitVector::clear() {
    for (auto& w : words_) w = 0;
}

std::vector<std::size_t> BitVector::ones() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
        std::uint64_t w = words_[k];
        while (w) {
            out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

std::string BitVector::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

BitVector BitVector::from_string(const std::string& bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i, true);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return v;
}

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': case '_': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
        default: throw std::invalid_argument(std::string("not a Pauli: ") + c);
    }
}

std::size_t PauliFrame::weight() const {
    BitVector support = x_;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (z_.get(k)) support.set(k, true);
    }
    return support.popcount();
}

bool PauliFrame::anticommutes(const PauliFrame& other) const {
    return x_.dot(other.z_) ^ z_.dot(other.x_);
}

std::string PauliFrame::to_string() const {
    std::string s(size(), 'I');
    for (std::size_t q = 0; q < size(); ++q) s[q] = pauli_char(get(q));
    return s;
}

PauliFrame PauliFrame::from_string(const std::string& s) {
    PauliFrame f(s.size());
    for (std::size_t q = 0; q < s.size(); ++q) f.set(q, pauli_from_char(s[q]));
    return f;
}

PauliFrame compose(const PauliFrame& a, const PauliFrame& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("compose: Pauli frames act on different registers");
    }
    PauliFrame r = a;
    r.x() ^= b.x();
    r.z() ^= b.z();
    return r;
}

PauliFrame PauliOperator::to_frame(std::size_t n) const {
    PauliFrame f(n);
    for (const auto& [q, p] : terms) {
        if (q >= n) throw std::out_of_range("PauliOperator term outside register");
        f.apply(q, p);
    }
    return f;
}

PauliOperator PauliOperator::from_frame(const PauliFrame& f) {
    PauliOperator op;
    for (std::size_t q = 0; q < f.size(); ++q) {
        if (auto p = f.get(q); p != Pauli::I) op.terms.emplace_back(q, p);
    }
    return op;
}

}  // namespace hhqec
