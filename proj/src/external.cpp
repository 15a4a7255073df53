// Copyright 2026 The semimo Authors
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

#include "semimo/external.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <mutex>

#include <sys/wait.h>
#include <unistd.h>

namespace semimo {

namespace {

class Limiter {
public:
    void set_limit(int limit) {
        std::lock_guard lock(mutex_);
        limit_ = std::max(1, limit);
        cv_.notify_all();
    }
    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return active_ < limit_; });
        ++active_;
    }
    void release() {
        std::lock_guard lock(mutex_);
        --active_;
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int limit_ = 1;
    int active_ = 0;
};

Limiter& limiter() {
    static Limiter instance;
    return instance;
}

struct Slot {
    Slot() { limiter().acquire(); }
    ~Slot() { limiter().release(); }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;
};

int decode_status(int status) {
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

}  // namespace

std::string substitute_placeholders(
    std::string command_template,
    const std::vector<std::pair<std::string, std::string>>& values) {
    for (const auto& [key, value] : values) {
        const std::string needle = "{" + key + "}";
        for (std::size_t pos = command_template.find(needle); pos != std::string::npos;
             pos = command_template.find(needle, pos + value.size())) {
            command_template.replace(pos, needle.size(), value);
        }
    }
    return command_template;
}

std::filesystem::path scratch_path(std::string_view stem, std::string_view extension) {
    static std::atomic<unsigned long> counter{0};
    const auto n = counter.fetch_add(1);
    std::string name = "semimo_" + std::to_string(::getpid()) + "_" + std::to_string(n) + "_" +
                       std::string(stem) + std::string(extension);
    return std::filesystem::temp_directory_path() / name;
}

void set_external_concurrency(int limit) { limiter().set_limit(limit); }

int run_command(const std::string& command) {
    Slot slot;
    return decode_status(std::system(command.c_str()));
}

std::string run_command_capture(const std::string& command) {
    Slot slot;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) throw ExternalCommandError("cannot start: " + command);
    std::string output;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) output += buf;
    const int status = decode_status(::pclose(pipe));
    if (status != 0) {
        throw ExternalCommandError("command exited with status " + std::to_string(status) + ": " +
                                   command);
    }
    return output;
}

}  // namespace semimo
