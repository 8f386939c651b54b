/*
* Copyright (C) 2026 The hospflow authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef HOSPFLOW_ERRORS_HPP
#define HOSPFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hospflow
{

/// Broad category of a failure. The C API maps each kind onto a status code
/// and the CLI onto an exit code.
enum class ErrorKind
{
    InvalidArgument,
    Domain,
    Config,
    Data,
    Convergence,
    Io,
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message)
        , m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

} // namespace hospflow

#endif // HOSPFLOW_ERRORS_HPP
