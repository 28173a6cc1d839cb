#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace hs {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // The smaller index becomes the root so component roots are deterministic.
    void unite(std::size_t x, std::size_t y)
    {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (y < x) std::swap(x, y);
        parent_[y] = x;
    }

    std::size_t components()
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i)
            if (find(i) == i) ++n;
        return n;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace hs
