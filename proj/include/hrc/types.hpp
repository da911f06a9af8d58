#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hrc {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm_sq()); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Index types. 0-based internally, 1-based in reports (o1, a1, r1).
using OperationId = int;
using AgentId = int;
using ResourceId = int;
using TaskId = int;

enum class ErrorCode {
    DimensionMismatch,
    InfeasibleAfterMaxTries,
    Unreachable,
    TooLarge,
    ChildGenerationStalled,
    DegenerateKpi,
    ParseError,
    NotFound,
    UnsupportedSchema,
    IoError,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::InfeasibleAfterMaxTries: return "INFEASIBLE_AFTER_MAX_TRIES";
        case ErrorCode::Unreachable: return "UNREACHABLE";
        case ErrorCode::TooLarge: return "TOO_LARGE";
        case ErrorCode::ChildGenerationStalled: return "CHILD_GENERATION_STALLED";
        case ErrorCode::DegenerateKpi: return "DEGENERATE_KPI";
        case ErrorCode::ParseError: return "PARSE_ERROR";
        case ErrorCode::NotFound: return "NOT_FOUND";
        case ErrorCode::UnsupportedSchema: return "UNSUPPORTED_SCHEMA";
        case ErrorCode::IoError: return "IO_ERROR";
        case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

}  // namespace hrc
