#include <treecsp/generate.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <string>

using namespace treecsp;

using std::size_t;
using std::uint64_t;
using std::vector;

auto Rng::below(uint64_t bound) -> uint64_t
{
    if (bound == 0)
        throw InvalidParams("Rng::below needs a positive bound");
    // reject the top partial block
    uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound + 1) % bound;
    while (true) {
        uint64_t x = _engine();
        if (x <= limit)
            return x % bound;
    }
}

auto Rng::chance(double p) -> bool
{
    return static_cast<double>(_engine() >> 11) * 0x1.0p-53 < p;
}

namespace
{
    // ways[i][l]: walks of i steps from level l to level h whose vertices
    // before the last stay strictly inside (0, h)
    auto walk_table(int h, size_t max_len) -> vector<vector<uint64_t>>
    {
        vector<vector<uint64_t>> ways(max_len + 1, vector<uint64_t>(static_cast<size_t>(h) + 1, 0));
        ways[0][static_cast<size_t>(h)] = 1;
        for (size_t i = 1; i <= max_len; ++i)
            for (int l = 0; l < h; ++l) {
                // l is the current vertex; it must be interior unless it is the start
                uint64_t total = 0;
                if (l + 1 == h)
                    total += ways[i - 1][static_cast<size_t>(h)];
                else if (l + 1 < h)
                    total += ways[i - 1][static_cast<size_t>(l + 1)];
                if (l - 1 > 0)
                    total += ways[i - 1][static_cast<size_t>(l - 1)];
                ways[i][static_cast<size_t>(l)] = total;
            }
        // a walk that sits at h before its last step is not allowed; walks
        // that reach h early are excluded because ways[i][h] = 0 for i > 0
        return ways;
    }
}

auto treecsp::count_minimal_paths(int h, size_t len) -> uint64_t
{
    if (h <= 0 || len > max_random_path_length)
        throw InvalidParams("count_minimal_paths needs h >= 1 and length <= " + std::to_string(max_random_path_length));
    return walk_table(h, len)[len][0];
}

auto treecsp::random_minimal_path(Rng & rng, int h, size_t max_len) -> OrientedPath
{
    if (h <= 0)
        throw InvalidParams("height must be positive");
    if (max_len < static_cast<size_t>(h) || max_len > max_random_path_length)
        throw InvalidParams("max path length must lie in [h, " + std::to_string(max_random_path_length) + "]");

    auto ways = walk_table(h, max_len);
    uint64_t total = 0;
    for (size_t len = 1; len <= max_len; ++len)
        total += ways[len][0];

    auto pick = rng.below(total);
    size_t len = 1;
    for (; len <= max_len; ++len) {
        if (pick < ways[len][0])
            break;
        pick -= ways[len][0];
    }

    std::string directions;
    int level = 0;
    for (size_t remaining = len; remaining > 0; --remaining) {
        uint64_t up = 0;
        if (level + 1 == h)
            up = ways[remaining - 1][static_cast<size_t>(h)];
        else if (level + 1 < h)
            up = ways[remaining - 1][static_cast<size_t>(level + 1)];
        if (pick < up) {
            directions.push_back('1');
            ++level;
        }
        else {
            pick -= up;
            directions.push_back('0');
            --level;
        }
    }
    return OrientedPath(directions);
}

auto treecsp::gen_random_special_tree(uint64_t seed, size_t a_count, size_t b_count, int h, size_t max_path_len)
    -> SpecialTreeSpec
{
    if (a_count == 0 || b_count == 0)
        throw InvalidParams("template needs at least one A and one B vertex");
    if (h <= 0)
        throw InvalidParams("height must be positive");
    if (max_path_len < static_cast<size_t>(h) || max_path_len > max_random_path_length)
        throw InvalidParams("max path length must lie in [h, " + std::to_string(max_random_path_length) + "]");

    Rng rng(seed);

    // Aldous-Broder on K_{a,b}: vertices 0..a-1 are A, a..a+b-1 are B
    const size_t n = a_count + b_count;
    vector<char> visited(n, 0);
    size_t current = rng.below(n);
    visited[current] = 1;
    size_t remaining = n - 1;
    vector<std::pair<size_t, size_t>> template_edges;
    while (remaining > 0) {
        size_t next = current < a_count ? a_count + rng.below(b_count) : rng.below(a_count);
        if (! visited[next]) {
            visited[next] = 1;
            --remaining;
            if (current < a_count)
                template_edges.emplace_back(current, next - a_count);
            else
                template_edges.emplace_back(next, current - a_count);
        }
        current = next;
    }
    std::sort(template_edges.begin(), template_edges.end());

    SpecialTreeSpec spec;
    spec.a_count = a_count;
    spec.b_count = b_count;
    spec.height = h;
    for (auto & [a, b] : template_edges)
        spec.edges.push_back({a, b, random_minimal_path(rng, h, max_path_len)});
    validate_spec(spec);
    return spec;
}

auto treecsp::random_digraph(Rng & rng, size_t n, double p, bool loops) -> Digraph
{
    vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if ((u != v || loops) && rng.chance(p))
                edges.emplace_back(u, v);
    return Digraph(n, std::move(edges));
}
