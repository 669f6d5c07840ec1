#pragma once

#include <ramsey/colouring.hpp>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace ramsey::testing {

inline auto source_dir() -> std::filesystem::path
{
    return RAMSEY_SOURCE_DIR;
}

inline auto random_explicit(std::mt19937 & rng, int order, int r) -> ExplicitColouring
{
    std::uniform_int_distribution<Colour> pick(1, r);
    ExplicitColouring g(order, r);
    for (int i = 0; i < order; ++i)
        for (int j = i + 1; j < order; ++j)
            g.set(i, j, pick(rng));
    return g;
}

inline auto random_linear(std::mt19937 & rng, int order, int r) -> LengthColouring
{
    std::uniform_int_distribution<Colour> pick(1, r);
    std::vector<Colour> c(static_cast<std::size_t>(order - 1));
    for (auto & x : c)
        x = pick(rng);
    return LengthColouring::linear(order, r, c);
}

inline auto random_cyclic(std::mt19937 & rng, int order, int r) -> LengthColouring
{
    std::uniform_int_distribution<Colour> pick(1, r);
    std::vector<Colour> c(static_cast<std::size_t>(order / 2));
    for (auto & x : c)
        x = pick(rng);
    return LengthColouring::cyclic(order, r, c);
}

/// Every length colouring of the given order with colours 1..r, in
/// lexicographic order.
inline auto all_linear(int order, int r) -> std::vector<LengthColouring>
{
    std::vector<LengthColouring> out;
    std::vector<Colour> c(static_cast<std::size_t>(order - 1), 1);
    while (true) {
        out.push_back(LengthColouring::linear(order, r, c));
        std::size_t i = 0;
        while (i < c.size() && c[i] == r)
            c[i++] = 1;
        if (i == c.size())
            return out;
        ++c[i];
    }
}

/// Fresh scratch directory under the system temp dir.
class ScratchDir
{
public:
    explicit ScratchDir(const std::string & name)
    {
        _path = std::filesystem::temp_directory_path() / ("ramsey-test-" + name + "-" + std::to_string(std::random_device{}()));
        std::filesystem::remove_all(_path);
        std::filesystem::create_directories(_path);
    }
    ~ScratchDir() { std::filesystem::remove_all(_path); }
    ScratchDir(const ScratchDir &) = delete;
    auto operator=(const ScratchDir &) -> ScratchDir & = delete;

    auto path() const -> const std::filesystem::path & { return _path; }
    auto operator/(const std::string & name) const -> std::filesystem::path { return _path / name; }

private:
    std::filesystem::path _path;
};

}
