#include <treecsp/formats.hh>
#include <treecsp/errors.hh>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

using namespace treecsp;

using std::size_t;
using std::string;
using std::to_string;
using std::vector;

namespace
{
    struct Line
    {
        size_t number;
        vector<string> fields;
    };

    [[noreturn]] auto fail(size_t line, const string & what) -> void
    {
        throw ParseError("line " + to_string(line) + ": " + what);
    }

    // Splits on single spaces; blank and comment lines are dropped.
    auto tokenize(const string & text, bool require_newline) -> vector<Line>
    {
        if (require_newline && (text.empty() || text.back() != '\n'))
            fail(1 + static_cast<size_t>(std::count(text.begin(), text.end(), '\n')), "missing trailing newline");
        vector<Line> lines;
        std::istringstream in(text);
        string raw;
        size_t number = 0;
        while (std::getline(in, raw)) {
            ++number;
            if (! raw.empty() && raw.back() == '\r')
                raw.pop_back();
            if (raw.empty() || raw[0] == '#')
                continue;
            Line line{number, {}};
            std::istringstream words(raw);
            string w;
            while (words >> w)
                line.fields.push_back(w);
            if (! line.fields.empty())
                lines.push_back(std::move(line));
        }
        return lines;
    }

    auto number(const Line & line, size_t i) -> size_t
    {
        if (i >= line.fields.size())
            fail(line.number, "missing field");
        auto & s = line.fields[i];
        size_t value = 0;
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || end != s.data() + s.size())
            fail(line.number, "expected a non-negative integer, got '" + s + "'");
        return value;
    }

    auto expect_fields(const Line & line, size_t count) -> void
    {
        if (line.fields.size() != count)
            fail(line.number, "expected " + to_string(count) + " fields, got " + to_string(line.fields.size()));
    }

    auto header(const vector<Line> & lines, const string & keyword, size_t count) -> const Line &
    {
        if (lines.empty())
            fail(1, "missing '" + keyword + "' header");
        auto & h = lines.front();
        if (h.fields[0] != keyword)
            fail(h.number, "expected '" + keyword + "' header");
        expect_fields(h, count);
        return h;
    }
}

auto treecsp::parse_dg(const string & text) -> Digraph
{
    auto lines = tokenize(text, true);
    auto & h = header(lines, "digraph", 3);
    size_t n = number(h, 1), m = number(h, 2);
    if (lines.size() != m + 1)
        fail(lines.back().number, "expected " + to_string(m) + " edge lines, got " + to_string(lines.size() - 1));
    vector<Edge> edges;
    std::set<Edge> seen;
    for (size_t i = 1; i <= m; ++i) {
        auto & line = lines[i];
        expect_fields(line, 2);
        auto u = number(line, 0), v = number(line, 1);
        if (u >= n || v >= n)
            fail(line.number, "vertex out of range");
        Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
        if (! seen.insert(e).second)
            fail(line.number, "duplicate edge");
        edges.push_back(e);
    }
    return Digraph(n, std::move(edges));
}

auto treecsp::write_dg(const Digraph & g) -> string
{
    string out = "digraph " + to_string(g.vertex_count()) + " " + to_string(g.edges().size()) + "\n";
    for (auto & [u, v] : g.edges())
        out += to_string(u) + " " + to_string(v) + "\n";
    return out;
}

auto treecsp::parse_stree(const string & text) -> SpecialTreeSpec
{
    auto lines = tokenize(text, false);
    auto & h = header(lines, "stree", 5);
    SpecialTreeSpec spec;
    spec.a_count = number(h, 1);
    spec.b_count = number(h, 2);
    spec.height = static_cast<int>(number(h, 3));
    size_t m = number(h, 4);
    if (lines.size() != m + 1)
        fail(lines.back().number, "expected " + to_string(m) + " edge lines, got " + to_string(lines.size() - 1));
    for (size_t i = 1; i <= m; ++i) {
        auto & line = lines[i];
        expect_fields(line, 3);
        TemplateEdge e;
        e.a = number(line, 0);
        e.b = number(line, 1);
        try {
            e.path = OrientedPath(line.fields[2]);
        }
        catch (const Error & err) {
            fail(line.number, err.what());
        }
        spec.edges.push_back(std::move(e));
    }
    try {
        validate_spec(spec);
    }
    catch (const InvalidSpec & err) {
        fail(h.number, err.what());
    }
    return spec;
}

auto treecsp::write_stree(const SpecialTreeSpec & spec) -> string
{
    string out = "stree " + to_string(spec.a_count) + " " + to_string(spec.b_count) + " " + to_string(spec.height) + " "
        + to_string(spec.edges.size()) + "\n";
    for (auto & e : spec.edges)
        out += to_string(e.a) + " " + to_string(e.b) + " " + e.path.directions() + "\n";
    return out;
}

auto treecsp::parse_op(const string & text) -> OperationTable
{
    auto lines = tokenize(text, false);
    auto & h = header(lines, "op", 3);
    size_t n = number(h, 1), k = number(h, 2);
    if (k == 0 || k > 64)
        fail(h.number, "arity must lie in [1, 64]");
    auto size = checked_power(n, static_cast<unsigned>(k), default_table_budget);
    if (! size)
        fail(h.number, "table too large");
    if (lines.size() != *size + 1)
        fail(lines.back().number, "expected " + to_string(*size) + " values, got " + to_string(lines.size() - 1));
    vector<Vertex> values(*size);
    for (size_t i = 0; i < *size; ++i) {
        auto & line = lines[i + 1];
        expect_fields(line, 1);
        auto v = number(line, 0);
        if (v >= n)
            fail(line.number, "value out of range");
        values[i] = static_cast<Vertex>(v);
    }
    return OperationTable(n, static_cast<unsigned>(k), std::move(values));
}

auto treecsp::write_op(const OperationTable & op) -> string
{
    string out = "op " + to_string(op.base_size()) + " " + to_string(op.arity()) + "\n";
    for (auto v : op.values())
        out += to_string(v) + "\n";
    return out;
}

auto treecsp::write_roles(const SpecialTree & tree) -> string
{
    string out;
    for (Vertex v = 0; v < tree.vertex_count(); ++v)
        out += to_string(v) + " " + role_name(tree.role(v)) + "\n";
    return out;
}

auto treecsp::parse_roles(const string & text) -> vector<VertexRole>
{
    auto lines = tokenize(text, false);
    vector<VertexRole> roles;
    for (auto & line : lines) {
        expect_fields(line, 2);
        if (number(line, 0) != roles.size())
            fail(line.number, "vertices must be listed in order");
        auto & r = line.fields[1];
        VertexRole role;
        auto parse_index = [&](const string & s) {
            size_t value = 0;
            auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (s.empty() || ec != std::errc() || end != s.data() + s.size())
                fail(line.number, "bad role '" + r + "'");
            return value;
        };
        if (r.size() >= 2 && r[0] == 'A') {
            role.kind = RoleKind::A;
            role.index = parse_index(r.substr(1));
        }
        else if (r.size() >= 2 && r[0] == 'B') {
            role.kind = RoleKind::B;
            role.index = parse_index(r.substr(1));
        }
        else if (r.size() >= 4 && r[0] == 'P' && r.find(':') != string::npos) {
            auto colon = r.find(':');
            role.kind = RoleKind::Interior;
            role.index = parse_index(r.substr(1, colon - 1));
            role.position = parse_index(r.substr(colon + 1));
        }
        else
            fail(line.number, "bad role '" + r + "'");
        roles.push_back(role);
    }
    return roles;
}

auto treecsp::read_file(const string & path) -> string
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto treecsp::write_file(const string & path, const string & contents) -> void
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw Error("cannot write " + path);
    out << contents;
    if (! out)
        throw Error("write failed for " + path);
}
