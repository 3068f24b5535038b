#pragma once

#include <stdexcept>
#include <string>

namespace peco {

// Typed failures. kind() is the name printed by the CLI; exit_code() follows
// 1 = usage, 2 = data/format, 3 = numerical.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept = 0;
    virtual int exit_code() const noexcept = 0;
};

#define PECO_DEFINE_ERROR(Name, Code)                                   \
    class Name : public Error {                                          \
    public:                                                              \
        using Error::Error;                                              \
        const char* kind() const noexcept override { return #Name; }     \
        int exit_code() const noexcept override { return Code; }         \
    };

PECO_DEFINE_ERROR(ParamError, 1)
PECO_DEFINE_ERROR(IoError, 2)
PECO_DEFINE_ERROR(FormatError, 2)
PECO_DEFINE_ERROR(TruncationError, 2)
PECO_DEFINE_ERROR(LabelCodeError, 2)
PECO_DEFINE_ERROR(ValueError, 2)
PECO_DEFINE_ERROR(InsufficientData, 2)
PECO_DEFINE_ERROR(EmptyCluster, 3)
PECO_DEFINE_ERROR(NumericalError, 3)

#undef PECO_DEFINE_ERROR

}  // namespace peco
