#pragma once

#include <treecsp/spectree.hh>

#include <cstdint>
#include <string>
#include <vector>

namespace treecsp
{
    struct LemmaCheck
    {
        std::string name;
        // "pass", "fail" or "skipped"
        std::string status;
        std::string detail;
        std::size_t instances = 0;
    };

    struct LemmaSuiteReport
    {
        std::vector<LemmaCheck> checks;
        bool wnu_found = false;
        std::uint64_t seed = 0;

        auto passed() const -> bool;
        auto find(const std::string & name) const -> const LemmaCheck *;
        auto to_json() const -> std::string;
    };

    struct LemmaSuiteOptions
    {
        // how many candidate sets the pointing checks try per kind
        std::size_t max_candidates = 6;
        std::uint64_t arity_budget = 4096;
        std::uint64_t node_budget = 20'000'000;
        // run the binary extension and pointing constructions as well
        bool pointing = true;
    };

    /// Instance checks of the structural facts behind the classification:
    /// levels, the WNU extension, special polymers, the absorbing vertex,
    /// the order absorption, star absorption, S-set identities, binary
    /// extensions and pointing certificates. Deterministic under seed.
    auto verify_lemma_suite(const SpecialTreeSpec & spec, std::uint64_t seed, const LemmaSuiteOptions & options = {})
        -> LemmaSuiteReport;
}
