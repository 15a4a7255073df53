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

#include "semimo/precoding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace semimo {

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::kMf ? "MF" : "ZF";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "MF" || name == "mf") return Scheme::kMf;
    if (name == "ZF" || name == "zf") return Scheme::kZf;
    throw std::invalid_argument("unknown precoding scheme: " + std::string(name));
}

namespace {

void normalize_columns(CMatrix& f) {
    for (Eigen::Index k = 0; k < f.cols(); ++k) {
        const double norm = f.col(k).norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw DegenerateChannelError("precoder column " + std::to_string(k) +
                                         " has zero or non-finite norm");
        }
        f.col(k) /= norm;
    }
}

}  // namespace

Precoder mf_precoder(const CMatrix& h_known) {
    if (h_known.cols() < 1) throw std::invalid_argument("mf_precoder: empty channel");
    Precoder p;
    p.scheme = Scheme::kMf;
    p.source_channel = h_known;
    p.matrix_f = h_known;
    normalize_columns(p.matrix_f);
    return p;
}

Precoder zf_precoder(const CMatrix& h_known, const ZfOptions& options) {
    const Eigen::Index n_users = h_known.cols();
    if (n_users < 1) throw std::invalid_argument("zf_precoder: empty channel");
    if (h_known.rows() < n_users) {
        throw std::invalid_argument("zf_precoder: needs n_tx >= n_users");
    }

    CMatrix gram(n_users, n_users);
    gram.setZero();
    gram.selfadjointView<Eigen::Lower>().rankUpdate(h_known.adjoint());
    gram.triangularView<Eigen::StrictlyUpper>() = gram.adjoint();

    const Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw SingularGramError("zf_precoder: Gram matrix is not positive definite",
                                std::numeric_limits<double>::infinity());
    }
    const double rcond = llt.rcond();
    const double condition =
        rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition <= options.max_condition)) {
        std::ostringstream msg;
        msg << "zf_precoder: Gram matrix condition number " << condition
            << " exceeds threshold " << options.max_condition;
        throw SingularGramError(msg.str(), condition);
    }

    // (H^H H)^{-1} H^H, then its adjoint is H (H^H H)^{-1}.
    const CMatrix solved = llt.solve(h_known.adjoint());
    Precoder p;
    p.scheme = Scheme::kZf;
    p.source_channel = h_known;
    p.matrix_f = solved.adjoint();
    normalize_columns(p.matrix_f);
    return p;
}

Precoder make_precoder(Scheme scheme, const CMatrix& h_known, const ZfOptions& options) {
    return scheme == Scheme::kMf ? mf_precoder(h_known) : zf_precoder(h_known, options);
}

double precoder_cost_probe(Scheme scheme, int n_tx, int n_users, int repetitions,
                           std::uint64_t seed) {
    const ChannelSet ch = draw_channel_set(n_tx, n_users, 0.0, SeedSpec{seed, 0});
    repetitions = std::max(repetitions, 100);

    using clock = std::chrono::steady_clock;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repetitions));
    volatile double sink = 0.0;

    for (int warm = 0; warm < 3; ++warm) {
        sink = sink + std::real(make_precoder(scheme, ch.h_known).matrix_f(0, 0));
    }
    for (int r = 0; r < repetitions; ++r) {
        const auto start = clock::now();
        const Precoder p = make_precoder(scheme, ch.h_known);
        const auto stop = clock::now();
        sink = sink + std::real(p.matrix_f(0, 0));
        samples.push_back(std::chrono::duration<double>(stop - start).count());
    }
    const auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
    std::nth_element(samples.begin(), mid, samples.end());
    return *mid;
}

}  // namespace semimo
