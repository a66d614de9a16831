// Copyright 2026 The psym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSYM_ERRORS_HPP
#define PSYM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace psym {

// Every failure raised by the library derives from Error. The C API maps the
// concrete type onto a status code, so add a code in psym.h when adding a type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

class MissingAssignment : public Error {
public:
    explicit MissingAssignment(const std::string &var) : Error("no value assigned to variable '" + var + "'") {}
};

class PoleAtPoint : public Error {
public:
    PoleAtPoint() : Error("denominator vanishes at the evaluation point") {}
};

class ExponentOverflow : public Error {
public:
    ExponentOverflow() : Error("exponent exceeds the machine-word limit") {}
};

class NotExactDivision : public Error {
public:
    NotExactDivision() : Error("polynomial division is not exact") {}
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class EliminationFailed : public Error {
public:
    using Error::Error;
};

class LeadingNotLinear : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    using Error::Error;
};

class NonLinearInChi : public Error {
public:
    using Error::Error;
};

class SymbolicRankMismatch : public Error {
public:
    using Error::Error;
};

class BlowUp : public Error {
public:
    using Error::Error;
};

class PoleOnTrajectory : public Error {
public:
    using Error::Error;
};

class UnknownCoordinate : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace psym

#endif
