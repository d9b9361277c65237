#pragma once

#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "errors.hpp"
#include "ncycle.hpp"
#include "nsboxes.hpp"
#include "rational.hpp"

namespace ksbox {

using Json = nlohmann::ordered_json;

/// Locale-free float formatting with 12 significant digits (CSV convention).
inline std::string format_real(double x) { return fmt::format("{:.12g}", x); }

inline Json entry_to_json(const Rational& r) { return to_string(r); }
inline Json entry_to_json(double x) { return x; }

/// {"n_alice", "n_bob", "blocks": [{"x", "y", "p": [[p00,p01],[p10,p11]]}]}.
/// Exact entries are written as "num/den" strings, floats as numbers.
template <class T>
Json box_to_json(const BasicBox<T>& box)
{
    Json blocks = Json::array();
    for (int x = 1; x <= box.n_alice(); ++x)
        for (int y = 1; y <= box.n_bob(); ++y) {
            const auto& blk = box.block(x, y);
            blocks.push_back({{"x", x},
                              {"y", y},
                              {"p",
                               Json::array({Json::array({entry_to_json(blk[0][0]), entry_to_json(blk[0][1])}),
                                            Json::array({entry_to_json(blk[1][0]), entry_to_json(blk[1][1])})})}});
        }
    return {{"n_alice", box.n_alice()}, {"n_bob", box.n_bob()}, {"blocks", blocks}};
}

namespace detail {

template <class T>
T entry_from_json(const Json& j)
{
    if constexpr (is_exact_v<T>) {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        throw InvalidArgument("box JSON: exact entries must be \"num/den\" strings");
    } else {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
        throw InvalidArgument("box JSON: entry must be a number or \"num/den\" string");
    }
}

}  // namespace detail

/// Inverse of box_to_json. Every (x, y) block must appear exactly once.
template <class T>
BasicBox<T> box_from_json(const Json& j)
{
    try {
        BasicBox<T> box(j.at("n_alice").get<int>(), j.at("n_bob").get<int>());
        std::vector<char> seen(static_cast<std::size_t>(box.n_alice() * box.n_bob()), 0);
        for (const auto& blk : j.at("blocks")) {
            const int x = blk.at("x").get<int>();
            const int y = blk.at("y").get<int>();
            auto& dst = box.block(x, y);
            auto& flag = seen[static_cast<std::size_t>((x - 1) * box.n_bob() + (y - 1))];
            if (flag) throw InvalidArgument("box JSON: duplicate block");
            flag = 1;
            const auto& p = blk.at("p");
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) dst[a][b] = detail::entry_from_json<T>(p.at(a).at(b));
        }
        for (char s : seen)
            if (!s) throw InvalidArgument("box JSON: missing block");
        box.validate();
        return box;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("box JSON: ") + e.what());
    }
}

/// {"dim": d, "re": [[...]], "im": [[...]]}, row-major. "im" may be omitted
/// for real matrices. Validation errors name the violated invariant.
inline DensityMatrix density_matrix_from_json(const Json& j)
{
    try {
        const int dim = j.at("dim").get<int>();
        if (dim < 1) throw InvalidState("shape", "dim must be positive");
        const auto& re = j.at("re");
        const Json im = j.contains("im") ? j.at("im") : Json();
        auto check_rows = [&](const Json& rows, const char* name) {
            if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
                throw InvalidState("shape", std::string(name) + " must have dim rows");
            for (const auto& row : rows)
                if (!row.is_array() || static_cast<int>(row.size()) != dim)
                    throw InvalidState("shape", std::string(name) + " rows must have dim entries");
        };
        check_rows(re, "re");
        if (!im.is_null()) check_rows(im, "im");

        CMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                m(r, c) = Complex(re[r][c].get<double>(), im.is_null() ? 0.0 : im[r][c].get<double>());
        return DensityMatrix(std::move(m));
    } catch (const Json::exception& e) {
        throw InvalidState("shape", std::string("malformed density-matrix JSON: ") + e.what());
    }
}

inline Json density_matrix_to_json(const DensityMatrix& rho)
{
    Json re = Json::array();
    Json im = Json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        Json rr = Json::array();
        Json ii = Json::array();
        for (int c = 0; c < rho.dim(); ++c) {
            rr.push_back(rho(r, c).real());
            ii.push_back(rho(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return {{"dim", rho.dim()}, {"re", re}, {"im", im}};
}

}  // namespace ksbox
