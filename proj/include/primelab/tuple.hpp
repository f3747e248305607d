#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace primelab {

// Sorted distinct non-negative offsets h_1 < ... < h_k.
class PrimeTuple {
public:
    // Sorts the input; throws DomainError on duplicates, negatives or an empty list.
    explicit PrimeTuple(std::vector<std::int64_t> offsets);
    PrimeTuple(std::initializer_list<std::int64_t> offsets)
        : PrimeTuple(std::vector<std::int64_t>(offsets)) {}

    std::span<const std::int64_t> offsets() const { return offsets_; }
    std::size_t size() const { return offsets_.size(); }
    std::int64_t max_offset() const { return offsets_.back(); }
    std::int64_t operator[](std::size_t i) const { return offsets_[i]; }

    // Every offset shifted by `shift`; the result must stay non-negative.
    PrimeTuple translated(std::int64_t shift) const;

    // Number of distinct residues of the offsets modulo p.
    std::size_t residue_count(std::uint64_t p) const;

    // Distinct residues -h_i mod p, ascending: the roots of prod(n + h_i) mod p.
    std::vector<std::uint64_t> roots_mod(std::uint64_t p) const;

private:
    std::vector<std::int64_t> offsets_;
};

}  // namespace primelab
