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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "semimo/channel.hpp"

namespace semimo {

enum class Scheme { kMf, kZf };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view name);

/// Thrown when a user's known channel column is (numerically) zero.
class DegenerateChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the K x K Gram matrix of the known channel cannot be safely
/// factored. `condition()` is the estimated 1-norm condition number (inf if
/// the factorization broke down outright).
class SingularGramError : public std::runtime_error {
public:
    SingularGramError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Linear precoder with unit-norm columns f_k, one per user.
struct Precoder {
    CMatrix matrix_f;
    Scheme scheme = Scheme::kMf;
    CMatrix source_channel;
};

struct ZfOptions {
    /// Gram matrices with estimated condition number above this are rejected.
    double max_condition = 1e12;
};

/// f_k = h_k / |h_k|.
Precoder mf_precoder(const CMatrix& h_known);

/// f_k = H a_k / |H a_k| with a_k the k-th column of (H^H H)^{-1}. The Gram
/// matrix is Cholesky-factored and H (H^H H)^{-1} obtained by a triangular
/// solve against H^H, never by forming the inverse.
Precoder zf_precoder(const CMatrix& h_known, const ZfOptions& options = {});

Precoder make_precoder(Scheme scheme, const CMatrix& h_known, const ZfOptions& options = {});

/// Median wall time in seconds of constructing one precoder for a random
/// n_tx x n_users channel. `repetitions` is raised to at least 100.
double precoder_cost_probe(Scheme scheme, int n_tx, int n_users, int repetitions,
                           std::uint64_t seed = 0x5eed);

}  // namespace semimo
