#include "puedet/param_store.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "puedet/errors.hpp"

namespace puedet {

Matrix& ParamStore::add(const std::string& name, std::size_t rows, std::size_t cols) {
    if (has(name)) {
        throw ValidationError("param store: duplicate parameter name '" + name + "'");
    }
    if (rows == 0 || cols == 0) {
        throw ValidationError("param store: parameter '" + name + "' has empty shape");
    }
    index_[name] = names_.size();
    names_.push_back(name);
    values_.emplace_back(rows, cols);
    grads_.emplace_back(rows, cols);
    return values_.back();
}

std::size_t ParamStore::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw ValidationError("param store: unknown parameter '" + name + "'");
    }
    return it->second;
}

Matrix& ParamStore::value(const std::string& name) { return values_[index_of(name)]; }
const Matrix& ParamStore::value(const std::string& name) const {
    return values_[index_of(name)];
}
Matrix& ParamStore::grad(const std::string& name) { return grads_[index_of(name)]; }
const Matrix& ParamStore::grad(const std::string& name) const {
    return grads_[index_of(name)];
}

std::size_t ParamStore::total_coords() const {
    std::size_t n = 0;
    for (const Matrix& v : values_) n += v.size();
    return n;
}

void ParamStore::zero_grads() {
    for (Matrix& g : grads_) g.fill(0.0);
}

double ParamStore::grad_norm() const {
    double sq = 0.0;
    for (const Matrix& g : grads_) {
        const double* p = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) sq += p[i] * p[i];
    }
    return std::sqrt(sq);
}

void ParamStore::scale_grads(double factor) {
    for (Matrix& g : grads_) {
        double* p = g.data();
        for (std::size_t i = 0; i < g.size(); ++i) p[i] *= factor;
    }
}

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

void ParamStore::save(std::ostream& out,
                      const std::vector<std::pair<std::string, std::string>>& header) const {
    out << "puedet-checkpoint 1\n";
    out << "header " << header.size() << "\n";
    for (const auto& [key, val] : header) {
        out << key << " " << val << "\n";
    }
    out << "params " << names_.size() << "\n";
    for (std::size_t i = 0; i < names_.size(); ++i) {
        const Matrix& m = values_[i];
        out << names_[i] << " " << m.rows() << " " << m.cols() << "\n";
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (c > 0) out << " ";
                write_double(out, m(r, c));
            }
            out << "\n";
        }
    }
}

ParamStore ParamStore::load(std::istream& in,
                            std::vector<std::pair<std::string, std::string>>& header) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "puedet-checkpoint") {
        throw ValidationError("checkpoint: missing 'puedet-checkpoint' signature");
    }
    if (version != 1) {
        throw ValidationError("checkpoint: unsupported format version " +
                              std::to_string(version));
    }
    std::string tag;
    std::size_t n_header = 0;
    if (!(in >> tag >> n_header) || tag != "header") {
        throw ValidationError("checkpoint: malformed header section");
    }
    header.clear();
    for (std::size_t i = 0; i < n_header; ++i) {
        std::string key, val;
        if (!(in >> key >> val)) {
            throw ValidationError("checkpoint: truncated header");
        }
        header.emplace_back(key, val);
    }
    std::size_t n_params = 0;
    if (!(in >> tag >> n_params) || tag != "params") {
        throw ValidationError("checkpoint: malformed params section");
    }
    ParamStore store;
    for (std::size_t i = 0; i < n_params; ++i) {
        std::string name;
        std::size_t rows = 0, cols = 0;
        if (!(in >> name >> rows >> cols)) {
            throw ValidationError("checkpoint: truncated parameter table");
        }
        Matrix& m = store.add(name, rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                double v = 0.0;
                if (!(in >> v)) {
                    throw ValidationError("checkpoint: truncated values for '" + name + "'");
                }
                if (!std::isfinite(v)) {
                    throw ValidationError("checkpoint: non-finite value in '" + name + "'");
                }
                m(r, c) = v;
            }
        }
    }
    return store;
}

}  // namespace puedet
