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

#include "semimo/channel.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace semimo {

namespace {

void check_dimensions(int n_tx, int n_users, double err_var) {
    if (n_users < 1) throw std::invalid_argument("channel: need at least one user");
    if (n_tx < n_users) {
        throw std::invalid_argument("channel: n_tx (" + std::to_string(n_tx) +
                                    ") must be >= n_users (" + std::to_string(n_users) + ")");
    }
    if (!(err_var >= 0.0) || !std::isfinite(err_var)) {
        throw std::invalid_argument("channel: err_var must be finite and >= 0");
    }
}

}  // namespace

CMatrix draw_complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance,
                              std::mt19937_64& engine) {
    CMatrix m(rows, cols);
    if (variance == 0.0) {
        m.setZero();
        return m;
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
    // column-major fill order is part of the reproducibility contract
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

ChannelSet draw_channel_set(int n_tx, int n_users, double err_var, SeedSpec seed) {
    check_dimensions(n_tx, n_users, err_var);
    auto engine = make_engine(seed, Stream::kKnownChannel);
    CMatrix known = draw_complex_gaussian(n_tx, n_users, 1.0 / n_tx, engine);
    return with_channel_error(known, err_var, seed);
}

ChannelSet with_channel_error(const CMatrix& h_known, double err_var, SeedSpec seed) {
    const int n_tx = static_cast<int>(h_known.rows());
    const int n_users = static_cast<int>(h_known.cols());
    check_dimensions(n_tx, n_users, err_var);
    ChannelSet out;
    out.n_tx = n_tx;
    out.n_users = n_users;
    out.err_var = err_var;
    out.h_known = h_known;
    if (err_var == 0.0) {
        out.h_true = h_known;
    } else {
        auto engine = make_engine(seed, Stream::kChannelError);
        out.h_true = h_known + draw_complex_gaussian(n_tx, n_users, err_var, engine);
    }
    return out;
}

std::string format_complex(Complex z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
    return buf;
}

Complex parse_complex(const std::string& token) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double re = std::strtod(begin, &end);
    if (end == begin) throw std::runtime_error("bad complex token: " + token);
    const char* im_begin = end;
    const double im = std::strtod(im_begin, &end);
    if (end == im_begin || *end != 'j' || *(end + 1) != '\0') {
        throw std::runtime_error("bad complex token: " + token);
    }
    return {re, im};
}

void write_channel_set(std::ostream& out, const ChannelSet& channel) {
    char header[96];
    std::snprintf(header, sizeof header, "%d %d %.17g\n", channel.n_tx, channel.n_users,
                  channel.err_var);
    out << header;
    for (const CMatrix* m : {&channel.h_known, &channel.h_true}) {
        for (Eigen::Index r = 0; r < m->rows(); ++r) {
            for (Eigen::Index c = 0; c < m->cols(); ++c) {
                if (c) out << ' ';
                out << format_complex((*m)(r, c));
            }
            out << '\n';
        }
    }
}

ChannelSet read_channel_set(std::istream& in) {
    ChannelSet ch;
    if (!(in >> ch.n_tx >> ch.n_users >> ch.err_var)) {
        throw std::runtime_error("channel dump: malformed header");
    }
    check_dimensions(ch.n_tx, ch.n_users, ch.err_var);
    for (CMatrix* m : {&ch.h_known, &ch.h_true}) {
        m->resize(ch.n_tx, ch.n_users);
        for (int r = 0; r < ch.n_tx; ++r) {
            for (int c = 0; c < ch.n_users; ++c) {
                std::string token;
                if (!(in >> token)) throw std::runtime_error("channel dump: truncated matrix");
                (*m)(r, c) = parse_complex(token);
            }
        }
    }
    return ch;
}

}  // namespace semimo
