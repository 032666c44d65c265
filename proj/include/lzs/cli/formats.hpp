// Output formats shared by the command-line tool: matrix JSON, S-matrix JSON,
// spectrum and sweep CSV, and a stable digest of printed results.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lzs/models/descriptor_json.hpp"
#include "lzs/numerics/linalg.hpp"
#include "lzs/oracle/oracle.hpp"

namespace lzs::cli {

using Json = nlohmann::ordered_json;

/// %.17g: enough digits to read every double back exactly.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Nested rows of [re, im] pairs.
inline Json complex_matrix_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline ComplexMatrix complex_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix JSON: expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    ComplexMatrix m(n, static_cast<Eigen::Index>(j[0].size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != m.cols()) throw ValidationError("matrix JSON: ragged rows");
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto& z = j[i][c];
            if (!z.is_array() || z.size() != 2) throw ValidationError("matrix JSON: entries must be [re, im] pairs");
            m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return m;
}

inline Json real_matrix_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

/// max over rows and columns of |sum - 1|.
inline double stochastic_defect(const RealMatrix& s) {
    const RealVector ones = RealVector::Ones(s.rows());
    return std::max((s.rowwise().sum() - ones).cwiseAbs().maxCoeff(),
                    (s.colwise().sum().transpose() - ones).cwiseAbs().maxCoeff());
}

/// Descriptor fields other than the family.
inline Json params_json(const models::ModelDescriptor& d) {
    Json j = models::descriptor_to_json(d);
    j.erase("family");
    return j;
}

/// Everything needed to print one S-matrix result.
struct SmatrixReport {
    models::ModelDescriptor descriptor;
    std::string method;
    RealMatrix matrix;
    std::optional<double> horizon = std::nullopt;
    std::optional<double> rtol = std::nullopt;
    double error_estimate = 0.0;
    double unitarity_defect = 0.0;
    /// Result from a construction without an independent check.
    bool unverified = false;
};

/// {family, params, method, T, rtol, matrix, error_estimate, unitarity_defect[, unverified]}
inline Json smatrix_json(const SmatrixReport& r) {
    Json j;
    j["family"] = std::string(models::family_name(r.descriptor.family));
    j["params"] = params_json(r.descriptor);
    j["method"] = r.method;
    j["T"] = r.horizon ? Json(*r.horizon) : Json(nullptr);
    j["rtol"] = r.rtol ? Json(*r.rtol) : Json(nullptr);
    j["matrix"] = real_matrix_json(r.matrix);
    j["error_estimate"] = r.error_estimate;
    j["unitarity_defect"] = r.unitarity_defect;
    if (r.unverified) j["unverified"] = true;
    return j;
}

/// Header `t,e1,...,ek`, one row per grid point.
inline void write_spectrum_csv(std::ostream& os, const oracle::Spectrum& s) {
    os << "t";
    for (Eigen::Index c = 0; c < s.curves.cols(); ++c) os << ",e" << c + 1;
    os << "\n";
    for (std::size_t p = 0; p < s.t.size(); ++p) {
        os << format_double(s.t[p]);
        for (Eigen::Index c = 0; c < s.curves.cols(); ++c) os << "," << format_double(s.curves(p, c));
        os << "\n";
    }
}

/// 64-bit FNV-1a of a string, as 16 hex digits.
inline std::string digest(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lzs::cli
