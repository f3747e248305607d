#include "primelab/tuple.hpp"

#include <algorithm>

#include "primelab/error.hpp"

namespace primelab {

PrimeTuple::PrimeTuple(std::vector<std::int64_t> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.empty()) throw DomainError("PrimeTuple: empty offset list");
    std::sort(offsets_.begin(), offsets_.end());
    if (offsets_.front() < 0) throw DomainError("PrimeTuple: negative offset");
    if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
        throw DomainError("PrimeTuple: offsets must be distinct");
}

PrimeTuple PrimeTuple::translated(std::int64_t shift) const {
    std::vector<std::int64_t> out(offsets_);
    for (auto& h : out) h += shift;
    return PrimeTuple(std::move(out));
}

std::vector<std::uint64_t> PrimeTuple::roots_mod(std::uint64_t p) const {
    const auto m = static_cast<std::int64_t>(p);
    std::vector<std::uint64_t> roots;
    roots.reserve(offsets_.size());
    for (auto h : offsets_) roots.push_back(static_cast<std::uint64_t>(((-h % m) + m) % m));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::size_t PrimeTuple::residue_count(std::uint64_t p) const { return roots_mod(p).size(); }

}  // namespace primelab
