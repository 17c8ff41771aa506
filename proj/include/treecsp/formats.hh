#pragma once

#include <treecsp/algebra.hh>
#include <treecsp/digraph.hh>
#include <treecsp/spectree.hh>

#include <string>

namespace treecsp
{
    // All parsers throw ParseError with a line number.

    /// `digraph <n> <m>` then m lines `<u> <v>`; `#` lines are comments; the
    /// text must end with a newline.
    auto parse_dg(const std::string & text) -> Digraph;
    auto write_dg(const Digraph & g) -> std::string;

    /// `stree <|A|> <|B|> <h> <m>` then m lines `<a> <b> <path>`.
    auto parse_stree(const std::string & text) -> SpecialTreeSpec;
    auto write_stree(const SpecialTreeSpec & spec) -> std::string;

    /// `op <n> <k>` then n^k values, tuples in lexicographic order.
    auto parse_op(const std::string & text) -> OperationTable;
    auto write_op(const OperationTable & op) -> std::string;

    /// One `<vertex> <role>` line per vertex.
    auto write_roles(const SpecialTree & tree) -> std::string;
    auto parse_roles(const std::string & text) -> std::vector<VertexRole>;

    auto read_file(const std::string & path) -> std::string;
    auto write_file(const std::string & path, const std::string & contents) -> void;
}
