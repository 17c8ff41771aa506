#include <treecsp/bitset.hh>

#include <algorithm>
#include <stdexcept>

using namespace treecsp;

Bitset::Bitset(std::size_t size, bool filled) :
    _size(size),
    _words(words_for(size), 0)
{
    if (filled)
        fill();
}

Bitset::Bitset(std::size_t size, std::initializer_list<std::size_t> members) :
    Bitset(size)
{
    for (auto m : members) {
        if (m >= size)
            throw std::out_of_range("Bitset member out of range");
        set(m);
    }
}

auto Bitset::from_members(std::size_t size, const std::vector<Vertex> & members) -> Bitset
{
    Bitset result(size);
    for (auto m : members) {
        if (m >= size)
            throw std::out_of_range("Bitset member out of range");
        result.set(m);
    }
    return result;
}

auto Bitset::fill() -> void
{
    std::fill(_words.begin(), _words.end(), ~std::uint64_t{0});
    if (_size % 64)
        _words.back() = (std::uint64_t{1} << (_size % 64)) - 1;
}

auto Bitset::clear() -> void
{
    std::fill(_words.begin(), _words.end(), 0);
}

auto Bitset::count() const -> std::size_t
{
    if (_words.size() == 1)
        return std::popcount(_words[0]);
    return kernels::active().popcount(_words.data(), _words.size());
}

auto Bitset::any() const -> bool
{
    for (auto w : _words)
        if (w)
            return true;
    return false;
}

auto Bitset::intersects(const Bitset & other) const -> bool
{
    if (_words.size() == 1)
        return _words[0] & other._words[0];
    return kernels::active().and_any(_words.data(), other._words.data(), std::min(_words.size(), other._words.size()));
}

auto Bitset::is_subset_of(const Bitset & other) const -> bool
{
    for (std::size_t i = 0; i < _words.size(); ++i) {
        std::uint64_t theirs = i < other._words.size() ? other._words[i] : 0;
        if (_words[i] & ~theirs)
            return false;
    }
    return true;
}

auto Bitset::intersect_with(const Bitset & other) -> bool
{
    if (other._size != _size)
        throw std::invalid_argument("Bitset size mismatch");
    if (_words.size() == 1) {
        auto before = _words[0];
        _words[0] &= other._words[0];
        return before != _words[0];
    }
    return kernels::active().and_assign(_words.data(), other._words.data(), _words.size());
}

auto Bitset::unite_with(const Bitset & other) -> bool
{
    if (other._size != _size)
        throw std::invalid_argument("Bitset size mismatch");
    if (_words.size() == 1) {
        auto before = _words[0];
        _words[0] |= other._words[0];
        return before != _words[0];
    }
    return kernels::active().or_assign(_words.data(), other._words.data(), _words.size());
}

auto Bitset::find_first() const -> std::size_t
{
    for (std::size_t w = 0; w < _words.size(); ++w)
        if (_words[w])
            return w * 64 + static_cast<std::size_t>(std::countr_zero(_words[w]));
    return npos;
}

auto Bitset::find_next(std::size_t after) const -> std::size_t
{
    std::size_t i = after + 1;
    if (i >= _size)
        return npos;
    std::size_t w = i >> 6;
    std::uint64_t bits = _words[w] & (~std::uint64_t{0} << (i & 63));
    while (true) {
        if (bits)
            return w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        if (++w >= _words.size())
            return npos;
        bits = _words[w];
    }
}

auto Bitset::members() const -> std::vector<Vertex>
{
    std::vector<Vertex> result;
    for_each([&](std::size_t i) { result.push_back(static_cast<Vertex>(i)); });
    return result;
}

auto Bitset::to_string() const -> std::string
{
    std::string result = "{";
    bool first = true;
    for_each([&](std::size_t i) {
        if (! first)
            result += ",";
        first = false;
        result += std::to_string(i);
    });
    return result + "}";
}

namespace treecsp
{
    auto operator==(const Bitset & a, const Bitset & b) -> bool
    {
        return a._size == b._size && a._words == b._words;
    }

    auto operator<(const Bitset & a, const Bitset & b) -> bool
    {
        if (a._size != b._size)
            return a._size < b._size;
        return a._words < b._words;
    }

    auto operator&(const Bitset & a, const Bitset & b) -> Bitset
    {
        Bitset result = a;
        result.intersect_with(b);
        return result;
    }

    auto operator|(const Bitset & a, const Bitset & b) -> Bitset
    {
        Bitset result = a;
        result.unite_with(b);
        return result;
    }
}
