#include <treecsp/minpath.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <deque>
#include <unordered_map>

using namespace treecsp;

using std::optional;
using std::size_t;
using std::string;
using std::vector;

OrientedPath::OrientedPath(string directions) :
    _directions(std::move(directions))
{
    for (char c : _directions)
        if (c != '0' && c != '1')
            throw ParseError("path literal may contain only '0' and '1': " + _directions);
}

auto OrientedPath::levels() const -> vector<int>
{
    vector<int> result(vertex_count(), 0);
    for (size_t i = 0; i < length(); ++i)
        result[i + 1] = result[i] + (forward(i) ? 1 : -1);
    int lowest = *std::min_element(result.begin(), result.end());
    for (auto & l : result)
        l -= lowest;
    return result;
}

auto OrientedPath::height() const -> int
{
    auto l = levels();
    return *std::max_element(l.begin(), l.end());
}

auto OrientedPath::to_digraph() const -> Digraph
{
    vector<Edge> edges;
    for (size_t i = 0; i < length(); ++i) {
        auto a = static_cast<Vertex>(i), b = static_cast<Vertex>(i + 1);
        edges.push_back(forward(i) ? Edge{a, b} : Edge{b, a});
    }
    return Digraph(vertex_count(), std::move(edges));
}

auto treecsp::is_minimal(const OrientedPath & p) -> bool
{
    auto levels = p.levels();
    int h = *std::max_element(levels.begin(), levels.end());
    if (levels.front() != 0 || levels.back() != h)
        return false;
    for (size_t i = 1; i + 1 < levels.size(); ++i)
        if (levels[i] <= 0 || levels[i] >= h)
            return false;
    return true;
}

auto treecsp::net_length(const OrientedPath & p) -> int
{
    int forward = static_cast<int>(std::count(p.directions().begin(), p.directions().end(), '1'));
    return forward - (static_cast<int>(p.length()) - forward);
}

namespace
{
    // Moving from position s to s+1 (up) or s-1 (down) of p while q takes a
    // step in direction q_forward.
    auto can_move_up(const OrientedPath & p, size_t s, bool q_forward) -> bool
    {
        return s < p.length() && p.forward(s) == q_forward;
    }

    auto can_move_down(const OrientedPath & p, size_t s, bool q_forward) -> bool
    {
        return s > 0 && p.forward(s - 1) != q_forward;
    }
}

auto treecsp::path_onto_hom(const OrientedPath & q, const OrientedPath & p) -> optional<vector<size_t>>
{
    const size_t steps = q.length(), width = p.vertex_count();
    vector<Bitset> reach(steps + 1, Bitset(width));
    reach[0].set(0);
    for (size_t j = 0; j < steps; ++j) {
        bool dir = q.forward(j);
        reach[j].for_each([&](size_t s) {
            if (can_move_up(p, s, dir))
                reach[j + 1].set(s + 1);
            if (can_move_down(p, s, dir))
                reach[j + 1].set(s - 1);
        });
    }
    if (! reach[steps].test(p.length()))
        return std::nullopt;

    vector<size_t> map(steps + 1);
    map[steps] = p.length();
    for (size_t j = steps; j-- > 0;) {
        size_t next = map[j + 1];
        bool dir = q.forward(j);
        // predecessor s with a legal move s -> next
        if (next > 0 && reach[j].test(next - 1) && can_move_up(p, next - 1, dir))
            map[j] = next - 1;
        else
            map[j] = next + 1;
    }
    return map;
}

auto treecsp::is_onto_hom(const OrientedPath & q, const OrientedPath & p, const vector<size_t> & map) -> bool
{
    if (map.size() != q.vertex_count() || map.front() != 0 || map.back() != p.length())
        return false;
    auto pg = p.to_digraph();
    vector<bool> hit(p.vertex_count(), false);
    for (size_t i = 0; i < map.size(); ++i) {
        if (map[i] >= p.vertex_count())
            return false;
        hit[map[i]] = true;
    }
    for (size_t j = 0; j < q.length(); ++j) {
        auto a = static_cast<Vertex>(map[j]), b = static_cast<Vertex>(map[j + 1]);
        if (! (q.forward(j) ? pg.has_edge(a, b) : pg.has_edge(b, a)))
            return false;
    }
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

auto treecsp::common_onto_minimal_path(const vector<OrientedPath> & paths, size_t max_len) -> OrientedPath
{
    if (paths.empty())
        throw InvalidParams("common_onto_minimal_path needs at least one path");
    for (auto & p : paths)
        if (! is_minimal(p))
            throw NotMinimal("path " + p.directions() + " is not minimal");
    const int h = paths.front().height();
    for (auto & p : paths)
        if (p.height() != h)
            throw HeightMismatch("paths have different heights");

    if (max_len == 0)
        for (auto & p : paths)
            max_len += 4 * p.length();

    vector<OrientedPath> distinct = paths;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() == 1)
        return distinct.front();

    // Breadth-first search over tuples of positions, one per path: a walk in
    // the product of the paths from the initial tuple to the terminal tuple,
    // with every interior tuple strictly between levels 0 and h, spells out a
    // minimal path mapping onto each factor.
    const size_t k = distinct.size();
    vector<vector<int>> levels;
    for (auto & p : distinct)
        levels.push_back(p.levels());

    auto encode = [&](const vector<size_t> & pos) {
        std::uint64_t code = 0;
        for (size_t i = 0; i < k; ++i)
            code = code * distinct[i].vertex_count() + pos[i];
        return code;
    };
    auto decode = [&](std::uint64_t code) {
        vector<size_t> pos(k);
        for (size_t i = k; i-- > 0;) {
            pos[i] = code % distinct[i].vertex_count();
            code /= distinct[i].vertex_count();
        }
        return pos;
    };

    vector<size_t> start(k, 0), goal(k);
    for (size_t i = 0; i < k; ++i)
        goal[i] = distinct[i].length();
    const auto start_code = encode(start), goal_code = encode(goal);

    struct Parent
    {
        std::uint64_t from;
        char step;
        size_t depth;
    };
    std::unordered_map<std::uint64_t, Parent> parent;
    parent.emplace(start_code, Parent{start_code, 0, 0});
    std::deque<std::uint64_t> queue{start_code};

    while (! queue.empty()) {
        auto code = queue.front();
        queue.pop_front();
        auto depth = parent.at(code).depth;
        if (depth >= max_len)
            continue;
        auto pos = decode(code);
        int level = levels[0][pos[0]];

        for (char step : {'1', '0'}) {
            bool dir = step == '1';
            int next_level = level + (dir ? 1 : -1);
            if (next_level <= 0 || next_level > h)
                continue;
            // per-component options
            vector<vector<size_t>> options(k);
            bool dead = false;
            for (size_t i = 0; i < k && ! dead; ++i) {
                if (can_move_up(distinct[i], pos[i], dir))
                    options[i].push_back(pos[i] + 1);
                if (can_move_down(distinct[i], pos[i], dir))
                    options[i].push_back(pos[i] - 1);
                dead = options[i].empty();
            }
            if (dead)
                continue;

            vector<size_t> choice(k, 0), next(k);
            while (true) {
                for (size_t i = 0; i < k; ++i)
                    next[i] = options[i][choice[i]];
                auto next_code = encode(next);
                bool ok = next_level < h || next_code == goal_code;
                if (ok && ! parent.contains(next_code)) {
                    parent.emplace(next_code, Parent{code, step, depth + 1});
                    if (next_code == goal_code) {
                        string directions;
                        for (auto c = goal_code; c != start_code; c = parent.at(c).from)
                            directions.push_back(parent.at(c).step);
                        std::reverse(directions.begin(), directions.end());
                        OrientedPath q(directions);
                        for (auto & p : paths)
                            if (! path_onto_hom(q, p))
                                throw SearchExhausted("internal: constructed path failed verification");
                        return q;
                    }
                    queue.push_back(next_code);
                }
                size_t i = k;
                while (i > 0 && ++choice[i - 1] == options[i - 1].size())
                    choice[--i] = 0;
                if (i == 0)
                    break;
            }
        }
    }
    throw SearchExhausted("no common minimal path within length " + std::to_string(max_len));
}
