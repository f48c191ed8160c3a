// SPDX-License-Identifier: Apache-2.0
//
// urbanrt - site-specific urban downlink ray-tracing simulator
// Copyright (C) 2026 The urbanrt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "urbanrt/io.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>

namespace urbanrt
{

void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    try
    {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            writer(out);
            out.flush();
            if (!out)
                throw std::runtime_error("write failed for " + path.string());
        }
        std::filesystem::rename(tmp, path);
    }
    catch (...)
    {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

} // namespace urbanrt
