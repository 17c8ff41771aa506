#pragma once

#include <stdexcept>
#include <string>

namespace treecsp
{
    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

#define TREECSP_ERROR(name) \
    class name : public Error \
    { \
        public: \
            using Error::Error; \
    }

    TREECSP_ERROR(ParseError);
    TREECSP_ERROR(InvalidGraph);
    TREECSP_ERROR(NotBalanced);
    TREECSP_ERROR(BudgetExceeded);
    TREECSP_ERROR(HeightMismatch);
    TREECSP_ERROR(NotMinimal);
    TREECSP_ERROR(SearchExhausted);
    TREECSP_ERROR(InvalidSpec);
    TREECSP_ERROR(NotSpecialTree);
    TREECSP_ERROR(MixedLevels);
    TREECSP_ERROR(InvalidPin);
    TREECSP_ERROR(InconsistentPins);
    TREECSP_ERROR(NotWNU);
    TREECSP_ERROR(PreconditionViolated);
    TREECSP_ERROR(NoneFound);
    TREECSP_ERROR(ArityBudgetExceeded);
    TREECSP_ERROR(ConstructionStuck);
    TREECSP_ERROR(DistanceNotUniform);
    TREECSP_ERROR(InvalidParams);

#undef TREECSP_ERROR
}
