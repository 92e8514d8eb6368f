#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rgraph {

enum class Errc {
    ParseError,
    UnknownNode,
    DuplicateNode,
    DuplicateEdge,
    SelfEdge,
    EdgeKindViolatesBlocks,
    ArrowPointsToPast,
    NodeNotInAnyBlock,
    MultipleContextBlocks,
    TooManyNodes,
    NodesNotDisjoint,
    GraphTooLarge,
    NoWitnessFound,
    NodeSetMismatch,
    EdgeNotDashed,
    ConditioningNotSupported,
    NotARegressionGraph,
    PDRepairFailed,
    SingularSubmatrix,
    RankDeficient,
    TooFewRows,
    MissingValues,
    ConfigError,
    InvalidArgument,
};

std::string_view errc_name(Errc code);

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace rgraph
